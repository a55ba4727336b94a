#include "biharm/interval.hpp"

#include <algorithm>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace biharm {

namespace rnd {
namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
// Below this magnitude fma residuals may be inexact (subnormal range).
constexpr double kTiny = 0x1p-960;

double down(double x) { return std::nextafter(x, -kInf); }
double up(double x) { return std::nextafter(x, kInf); }

// Sign of the exact rounding error (exact - rounded) of s = a + b.
double two_sum_err(double a, double b, double s) {
  const double bb = s - a;
  return (a - (s - bb)) + (b - bb);
}
}  // namespace

double add_down(double a, double b) {
  const double s = a + b;
  return two_sum_err(a, b, s) < 0.0 ? down(s) : s;
}
double add_up(double a, double b) {
  const double s = a + b;
  return two_sum_err(a, b, s) > 0.0 ? up(s) : s;
}
double sub_down(double a, double b) { return add_down(a, -b); }
double sub_up(double a, double b) { return add_up(a, -b); }

double mul_down(double a, double b) {
  const double p = a * b;
  if (std::abs(p) < kTiny) return (a == 0.0 || b == 0.0) ? 0.0 : down(p);
  return std::fma(a, b, -p) < 0.0 ? down(p) : p;
}
double mul_up(double a, double b) {
  const double p = a * b;
  if (std::abs(p) < kTiny) return (a == 0.0 || b == 0.0) ? 0.0 : up(p);
  return std::fma(a, b, -p) > 0.0 ? up(p) : p;
}

double div_down(double a, double b) {
  const double q = a / b;
  if (a == 0.0) return 0.0;
  if (std::abs(q) < kTiny || std::abs(a) < kTiny) return down(q);
  // a - q*b is exact; the true quotient exceeds q iff it has the sign of b.
  const double r = std::fma(-q, b, a);
  return ((r < 0.0) != (b < 0.0) && r != 0.0) ? down(q) : q;
}
double div_up(double a, double b) {
  const double q = a / b;
  if (a == 0.0) return 0.0;
  if (std::abs(q) < kTiny || std::abs(a) < kTiny) return up(q);
  const double r = std::fma(-q, b, a);
  return ((r > 0.0) == (b > 0.0) && r != 0.0) ? up(q) : q;
}

double sqrt_down(double a) {
  const double s = std::sqrt(a);
  if (a == 0.0) return 0.0;
  if (a < kTiny) return down(s);
  return std::fma(-s, s, a) < 0.0 ? down(s) : s;
}
double sqrt_up(double a) {
  const double s = std::sqrt(a);
  if (a == 0.0) return 0.0;
  if (a < kTiny) return up(s);
  return std::fma(-s, s, a) > 0.0 ? up(s) : s;
}
}  // namespace rnd

namespace {
void check_finite(double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi)) throw std::overflow_error("interval endpoint is not finite");
}
}  // namespace

Interval::Interval(double x) : lo_(x), hi_(x) { check_finite(x, x); }

Interval::Interval(double lo, double hi) : lo_(lo), hi_(hi) {
  check_finite(lo, hi);
  if (!(lo <= hi)) throw std::invalid_argument("interval requires lo <= hi");
}

double Interval::mid() const {
  if (lo_ == hi_) return lo_;
  const double m = 0.5 * lo_ + 0.5 * hi_;
  return std::clamp(m, lo_, hi_);
}

double Interval::width() const { return rnd::sub_up(hi_, lo_); }

double Interval::mag() const { return std::max(std::abs(lo_), std::abs(hi_)); }

Interval& Interval::operator+=(const Interval& o) { return *this = *this + o; }
Interval& Interval::operator-=(const Interval& o) { return *this = *this - o; }
Interval& Interval::operator*=(const Interval& o) { return *this = *this * o; }
Interval& Interval::operator/=(const Interval& o) { return *this = *this / o; }

Interval operator+(const Interval& a, const Interval& b) {
  return {rnd::add_down(a.lo(), b.lo()), rnd::add_up(a.hi(), b.hi())};
}

Interval operator-(const Interval& a, const Interval& b) {
  return {rnd::sub_down(a.lo(), b.hi()), rnd::sub_up(a.hi(), b.lo())};
}

Interval operator*(const Interval& a, const Interval& b) {
  const double al = a.lo(), ah = a.hi(), bl = b.lo(), bh = b.hi();
  if (al >= 0.0 && bl >= 0.0) return {rnd::mul_down(al, bl), rnd::mul_up(ah, bh)};
  const double lo = std::min({rnd::mul_down(al, bl), rnd::mul_down(al, bh), rnd::mul_down(ah, bl),
                              rnd::mul_down(ah, bh)});
  const double hi =
      std::max({rnd::mul_up(al, bl), rnd::mul_up(al, bh), rnd::mul_up(ah, bl), rnd::mul_up(ah, bh)});
  return {lo, hi};
}

Interval operator/(const Interval& a, const Interval& b) {
  if (b.contains_zero()) throw std::domain_error("interval division by an interval containing zero");
  const double al = a.lo(), ah = a.hi(), bl = b.lo(), bh = b.hi();
  const double lo = std::min({rnd::div_down(al, bl), rnd::div_down(al, bh), rnd::div_down(ah, bl),
                              rnd::div_down(ah, bh)});
  const double hi =
      std::max({rnd::div_up(al, bl), rnd::div_up(al, bh), rnd::div_up(ah, bl), rnd::div_up(ah, bh)});
  return {lo, hi};
}

namespace {
// x^n for x >= 0 with the given directed multiply.
template <class Mul>
double pow_nonneg(double x, int n, Mul mul) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r = mul(r, x);
  return r;
}
}  // namespace

Interval pow(const Interval& x, int n) {
  if (n < 0) throw std::invalid_argument("interval pow requires n >= 0");
  if (n == 0) return {1.0, 1.0};
  const double lo = x.lo(), hi = x.hi();
  if (n % 2 == 0) {
    if (lo >= 0.0) return {pow_nonneg(lo, n, rnd::mul_down), pow_nonneg(hi, n, rnd::mul_up)};
    if (hi <= 0.0) return {pow_nonneg(-hi, n, rnd::mul_down), pow_nonneg(-lo, n, rnd::mul_up)};
    return {0.0, pow_nonneg(std::max(-lo, hi), n, rnd::mul_up)};
  }
  const double l = lo >= 0.0 ? pow_nonneg(lo, n, rnd::mul_down) : -pow_nonneg(-lo, n, rnd::mul_up);
  const double h = hi >= 0.0 ? pow_nonneg(hi, n, rnd::mul_up) : -pow_nonneg(-hi, n, rnd::mul_down);
  return {l, h};
}

Interval sqr(const Interval& x) { return pow(x, 2); }

Interval sqrt(const Interval& x) {
  if (x.lo() < 0.0) throw std::domain_error("interval sqrt of negative values");
  return {rnd::sqrt_down(x.lo()), rnd::sqrt_up(x.hi())};
}

Interval pi_interval() {
  static const Interval pi{3.141592653589793, std::nextafter(3.141592653589793, 4.0)};
  return pi;
}

Interval sqrt6_interval() {
  static const Interval s6 = sqrt(Interval(6.0));
  return s6;
}

namespace {
double widen_down(double v) { return std::max(-1.0, std::nextafter(std::nextafter(v, -2.0), -2.0)); }
double widen_up(double v) { return std::min(1.0, std::nextafter(std::nextafter(v, 2.0), 2.0)); }

// Whether some point offset + 2k*pi (offset a multiple of pi/2 given as a
// coefficient of pi) may lie in x.
bool may_contain(const Interval& x, double offset_over_pi) {
  const Interval pi = pi_interval();
  const double two_pi = 2.0 * 3.141592653589793;
  const double k0 = std::floor((x.lo() - offset_over_pi * 3.141592653589793) / two_pi) - 1.0;
  const double k1 = std::ceil((x.hi() - offset_over_pi * 3.141592653589793) / two_pi) + 1.0;
  for (double k = k0; k <= k1; k += 1.0) {
    const Interval p = pi * Interval(offset_over_pi + 2.0 * k);
    if (p.hi() >= x.lo() && p.lo() <= x.hi()) return true;
  }
  return false;
}

// Range of a 2pi-periodic function with one maximum and one minimum per period.
template <class F>
Interval periodic_range(const Interval& x, F f, double max_at, double min_at) {
  if (x.width() >= 6.3) return {-1.0, 1.0};
  const double a = f(x.lo()), b = f(x.hi());
  double lo = widen_down(std::min(a, b));
  double hi = widen_up(std::max(a, b));
  if (may_contain(x, max_at)) hi = 1.0;
  if (may_contain(x, min_at)) lo = -1.0;
  return {lo, hi};
}
}  // namespace

Interval sin(const Interval& x) {
  return periodic_range(x, [](double v) { return std::sin(v); }, 0.5, -0.5);
}

Interval cos(const Interval& x) {
  return periodic_range(x, [](double v) { return std::cos(v); }, 0.0, 1.0);
}

Interval hull(const Interval& a, const Interval& b) {
  return {std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi())};
}

Interval intersect(const Interval& a, const Interval& b) {
  const double lo = std::max(a.lo(), b.lo()), hi = std::min(a.hi(), b.hi());
  if (lo > hi) throw std::domain_error("empty interval intersection");
  return {lo, hi};
}

Interval min(const Interval& a, const Interval& b) {
  return {std::min(a.lo(), b.lo()), std::min(a.hi(), b.hi())};
}

Interval max(const Interval& a, const Interval& b) {
  return {std::max(a.lo(), b.lo()), std::max(a.hi(), b.hi())};
}

std::ostream& operator<<(std::ostream& os, const Interval& x) {
  return os << '[' << x.lo() << ", " << x.hi() << ']';
}

std::size_t Box::widest() const {
  std::size_t k = 0;
  for (std::size_t i = 1; i < dims.size(); ++i) {
    if (dims[i].width() > dims[k].width()) k = i;
  }
  return k;
}

double Box::max_width() const {
  double w = 0.0;
  for (const auto& d : dims) w = std::max(w, d.width());
  return w;
}

Box Box::center() const {
  Box c = *this;
  for (auto& d : c.dims) d = Interval(d.mid());
  return c;
}

std::pair<Box, Box> Box::bisect() const {
  const std::size_t k = widest();
  const double m = dims[k].mid();
  Box a = *this, b = *this;
  a.dims[k] = Interval(dims[k].lo(), m);
  b.dims[k] = Interval(m, dims[k].hi());
  return {a, b};
}

bool Box::contains(const Box& o) const {
  if (o.size() != size()) return false;
  for (std::size_t i = 0; i < size(); ++i) {
    if (!dims[i].contains(o.dims[i])) return false;
  }
  return true;
}

}  // namespace biharm
