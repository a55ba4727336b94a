#pragma once

// Closed real intervals with outward rounding.
//
// Rounding is directed per operation using error-free transformations: the
// rounded result r of a + b, a * b, a / b or sqrt(a) is paired with the exact
// sign of its rounding error (TwoSum, or an fma residual), and r is stepped one
// ulp outward only on the side where it fell short. Exact operations stay
// exact. sin and cos use the libm value widened by two ulps.

#include <cmath>
#include <iosfwd>
#include <string>
#include <vector>

namespace biharm {

/// Label recorded in certificates.
inline constexpr const char* kRoundingMode = "eft-directed";

namespace rnd {
double add_down(double a, double b);
double add_up(double a, double b);
double sub_down(double a, double b);
double sub_up(double a, double b);
double mul_down(double a, double b);
double mul_up(double a, double b);
double div_down(double a, double b);
double div_up(double a, double b);
double sqrt_down(double a);
double sqrt_up(double a);
}  // namespace rnd

class Interval {
 public:
  Interval() = default;
  Interval(double x);  // NOLINT: point intervals convert implicitly
  Interval(double lo, double hi);

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double mid() const;
  double width() const;  // rounded up
  double mag() const;    // max |x|
  bool contains(double x) const { return lo_ <= x && x <= hi_; }
  bool contains(const Interval& o) const { return lo_ <= o.lo_ && o.hi_ <= hi_; }
  bool contains_zero() const { return lo_ <= 0.0 && 0.0 <= hi_; }
  bool is_point() const { return lo_ == hi_; }
  friend bool operator==(const Interval&, const Interval&) = default;

  Interval operator-() const { return {-hi_, -lo_}; }
  Interval& operator+=(const Interval& o);
  Interval& operator-=(const Interval& o);
  Interval& operator*=(const Interval& o);
  Interval& operator/=(const Interval& o);

 private:
  double lo_ = 0.0;
  double hi_ = 0.0;
};

Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator*(const Interval& a, const Interval& b);
/// Throws std::domain_error when b contains zero.
Interval operator/(const Interval& a, const Interval& b);

Interval sqr(const Interval& x);
Interval pow(const Interval& x, int n);
Interval sqrt(const Interval& x);
Interval sin(const Interval& x);
Interval cos(const Interval& x);
Interval hull(const Interval& a, const Interval& b);
/// Throws std::domain_error when the intersection is empty.
Interval intersect(const Interval& a, const Interval& b);
Interval min(const Interval& a, const Interval& b);
Interval max(const Interval& a, const Interval& b);

/// The two doubles adjacent to pi.
Interval pi_interval();
Interval sqrt6_interval();

std::ostream& operator<<(std::ostream& os, const Interval& x);

struct Box {
  std::vector<Interval> dims;

  Box() = default;
  Box(std::initializer_list<Interval> d) : dims(d) {}
  explicit Box(std::vector<Interval> d) : dims(std::move(d)) {}

  std::size_t size() const { return dims.size(); }
  const Interval& operator[](std::size_t i) const { return dims[i]; }
  Interval& operator[](std::size_t i) { return dims[i]; }
  std::size_t widest() const;
  double max_width() const;
  /// Point box at the midpoint of every dimension.
  Box center() const;
  std::pair<Box, Box> bisect() const;
  bool contains(const Box& o) const;
  friend bool operator==(const Box&, const Box&) = default;
};

}  // namespace biharm
