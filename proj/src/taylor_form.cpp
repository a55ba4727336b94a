#include "biharm/taylor_form.hpp"

namespace biharm {

namespace {
constexpr int K = Series2::K;
}

Series2::Series2(const Interval& c) {
  for (auto& row : c_) row.fill(Interval(0.0));
  c_[0][0] = c;
}

Series2 Series2::variable(int var, const Interval& x) {
  Series2 s(x);
  if (var == 0) {
    s.c_[1][0] = Interval(1.0);
  } else {
    s.c_[0][1] = Interval(1.0);
  }
  return s;
}

Series2 operator+(const Series2& a, const Series2& b) {
  Series2 r = a;
  for (int i = 0; i <= K; ++i)
    for (int j = 0; i + j <= K; ++j) r.c_[i][j] += b.c_[i][j];
  return r;
}

Series2 operator-(const Series2& a, const Series2& b) {
  Series2 r = a;
  for (int i = 0; i <= K; ++i)
    for (int j = 0; i + j <= K; ++j) r.c_[i][j] -= b.c_[i][j];
  return r;
}

Series2 Series2::operator-() const {
  Series2 r = *this;
  for (int i = 0; i <= K; ++i)
    for (int j = 0; i + j <= K; ++j) r.c_[i][j] = -c_[i][j];
  return r;
}

Series2 operator*(const Series2& a, const Series2& b) {
  Series2 r(0.0);
  for (int i = 0; i <= K; ++i) {
    for (int j = 0; i + j <= K; ++j) {
      if (a.c_[i][j] == Interval(0.0)) continue;
      for (int p = 0; i + p <= K; ++p) {
        for (int q = 0; i + p + j + q <= K; ++q) {
          r.c_[i + p][j + q] += a.c_[i][j] * b.c_[p][q];
        }
      }
    }
  }
  return r;
}

Series2 operator/(const Series2& a, const Series2& b) {
  // Reciprocal by the recurrence r * b = 1, graded by total degree.
  Series2 r(0.0);
  const Interval b0 = b.c_[0][0];
  r.c_[0][0] = Interval(1.0) / b0;
  for (int deg = 1; deg <= K; ++deg) {
    for (int i = 0; i <= deg; ++i) {
      const int j = deg - i;
      Interval acc(0.0);
      for (int p = 0; p <= i; ++p) {
        for (int q = 0; q <= j; ++q) {
          if (p == 0 && q == 0) continue;
          acc += b.c_[p][q] * r.c_[i - p][j - q];
        }
      }
      r.c_[i][j] = -(acc / b0);
    }
  }
  return a * r;
}

namespace {
// sin and cos of a series without constant term, as truncated power sums.
std::pair<Series2, Series2> sincos_nilpotent(const Series2& d) {
  Series2 s(0.0), c(1.0);
  Series2 pw(1.0);
  Interval fact(1.0);
  for (int m = 1; m <= K; ++m) {
    pw = pw * d;
    fact *= Interval(static_cast<double>(m));
    const Series2 term = pw * Series2(Interval(1.0) / fact);
    switch (m % 4) {
      case 1: s = s + term; break;
      case 2: c = c - term; break;
      case 3: s = s - term; break;
      case 0: c = c + term; break;
    }
  }
  return {s, c};
}
}  // namespace

Series2 sin(const Series2& u) {
  Series2 d = u;
  d.c_[0][0] = Interval(0.0);
  const auto [s, c] = sincos_nilpotent(d);
  const Interval u0 = u.c_[0][0];
  return Series2(sin(u0)) * c + Series2(cos(u0)) * s;
}

Series2 cos(const Series2& u) {
  Series2 d = u;
  d.c_[0][0] = Interval(0.0);
  const auto [s, c] = sincos_nilpotent(d);
  const Interval u0 = u.c_[0][0];
  return Series2(cos(u0)) * c - Series2(sin(u0)) * s;
}

Interval centered_form(const Series2& at_c, const Series2& at_x, const Box& box) {
  const bool two = box.size() > 1;
  const Interval X0 = box[0], X1 = two ? box[1] : Interval(0.0);
  const double c0 = X0.mid(), c1 = X1.mid();
  const Interval d0 = X0 - Interval(c0), d1 = X1 - Interval(c1);
  std::array<Interval, K + 1> p0, p1;
  for (int i = 0; i <= K; ++i) {
    p0[i] = pow(d0, i);
    p1[i] = pow(d1, i);
  }
  Interval acc(0.0);
  for (int i = 0; i <= K; ++i) {
    for (int j = 0; i + j <= K; ++j) {
      if (!two && j > 0) continue;
      const Interval& coef = (i + j < K) ? at_c(i, j) : at_x(i, j);
      acc += coef * p0[i] * p1[j];
    }
  }
  return acc;
}

}  // namespace biharm
