#pragma once

// Truncated bivariate Taylor arithmetic with interval coefficients, and the
// centered form built on it:
//
//   f(X) in sum_{|a| < K} f_a(c) (X - c)^a + sum_{|a| = K} f_a(X) (X - c)^a
//
// where f_a are normalized Taylor coefficients. Expanding around the box X
// (rather than a point) yields enclosures of f_a over the whole box, which
// bound the Lagrange remainder.

#include <array>

#include "biharm/interval.hpp"

namespace biharm {

inline constexpr int kFormOrder = 3;

class Series2 {
 public:
  static constexpr int K = kFormOrder;

  Series2() = default;
  Series2(const Interval& c);  // NOLINT: constants lift implicitly

  /// Independent variable number var (0 or 1) expanded around x.
  static Series2 variable(int var, const Interval& x);

  const Interval& operator()(int i, int j) const { return c_[i][j]; }
  Interval& operator()(int i, int j) { return c_[i][j]; }

  friend Series2 operator+(const Series2& a, const Series2& b);
  friend Series2 operator-(const Series2& a, const Series2& b);
  friend Series2 operator*(const Series2& a, const Series2& b);
  friend Series2 operator/(const Series2& a, const Series2& b);
  Series2 operator-() const;

  friend Series2 sin(const Series2& u);
  friend Series2 cos(const Series2& u);

 private:
  std::array<std::array<Interval, K + 1>, K + 1> c_{};
};

/// Centered-form enclosure over a 1- or 2-dimensional box from expansions
/// about the midpoint (at_c) and about the whole box (at_x).
Interval centered_form(const Series2& at_c, const Series2& at_x, const Box& box);

/// Expands f around the box (or its midpoint when at_center). f must be
/// callable as f(Series2, Series2); for 1-dimensional boxes the second
/// argument is a constant zero series.
template <class F>
Series2 expand_on(const F& f, const Box& box, bool at_center) {
  const bool two = box.size() > 1;
  auto pick = [&](const Interval& x) { return at_center ? Interval(x.mid()) : x; };
  return f(Series2::variable(0, pick(box[0])), two ? Series2::variable(1, pick(box[1])) : Series2(0.0));
}

template <class F>
Interval centered_form(const F& f, const Box& box) {
  return centered_form(expand_on(f, box, true), expand_on(f, box, false), box);
}

}  // namespace biharm
