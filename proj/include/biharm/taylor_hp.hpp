#pragma once

// Taylor-series integrator for the fourth-order system in a generic real
// type (used with 50-digit binary floats). Coefficients of phi are generated
// by the usual recurrences: sin(2 phi) and cos(2 phi) through S' = C u',
// C' = -S u', products by Cauchy convolution.

#include <array>
#include <cmath>
#include <vector>

namespace biharm {

template <class Real>
struct HpJet {
  std::array<Real, 4> x;  // phi, phi', phi'', phi'''
};

template <class Real>
class TaylorFlow {
 public:
  TaylorFlow(int d, int order, Real tol) : order_(order), tol_(tol) {
    dm1_ = Real(d - 1);
    q0_ = Real(-(d - 11) * d - 21);
    f0_ = Real(3 * (d - 3) * (d - 1)) / 2;
    g0_ = Real(3 * d - 5);
    alpha_ = Real(2 * (d - 4));
  }

  int order() const { return order_; }

  /// Taylor coefficients of phi about the current point, 0..order+3.
  std::vector<Real> coefficients(const std::array<Real, 4>& x0) const {
    const int M = order_ + 4;
    std::vector<Real> x(M, Real(0));
    x[0] = x0[0];
    x[1] = x0[1];
    x[2] = x0[2] / 2;
    x[3] = x0[3] / 6;
    // u = 2 phi; S = sin u, C = cos u.
    std::vector<Real> S(M), C(M), d1(M), d2(M), d3(M), v2(M), v3(M);
    using std::cos;
    using std::sin;
    S[0] = sin(2 * x[0]);
    C[0] = cos(2 * x[0]);
    for (int k = 0; k + 4 < M; ++k) {
      // Derivative series coefficient k needs x up to k+3.
      d1[k] = Real(k + 1) * x[k + 1];
      d2[k] = Real((k + 1) * (k + 2)) * x[k + 2];
      d3[k] = Real((k + 1) * (k + 2) * (k + 3)) * x[k + 3];
      if (k > 0) {
        Real s(0), c(0);
        for (int j = 1; j <= k; ++j) {
          const Real ju = Real(2 * j) * x[j];
          s += ju * C[k - j];
          c -= ju * S[k - j];
        }
        S[k] = s / k;
        C[k] = c / k;
      }
      Real a(0);
      for (int j = 0; j <= k; ++j) a += d1[j] * d1[k - j];
      v2[k] = a;
      Real b(0);
      for (int j = 0; j <= k; ++j) b += v2[j] * d1[k - j];
      v3[k] = b;
      // rhs = q phi'' - f + (6 phi'' + q'/2) phi'^2 + alpha (g phi' + phi'^3 - phi''')
      // with q = (d-1) C + q0, q'/2 = -(d-1) S, f = f0 S, g = ((d-1) C + g0)/2.
      Real r = q0_ * d2[k] - f0_ * S[k] + alpha_ * (g0_ / 2 * d1[k] + v3[k] - d3[k]);
      for (int j = 0; j <= k; ++j) {
        r += dm1_ * C[j] * d2[k - j];
        r += (6 * d2[j] - dm1_ * S[j]) * v2[k - j];
        r += alpha_ * dm1_ / 2 * C[j] * d1[k - j];
      }
      x[k + 4] = r / Real((k + 1) * (k + 2) * (k + 3) * (k + 4));
    }
    return x;
  }

  /// Step size from the last two coefficients (Jorba and Zou).
  Real step_size(const std::vector<Real>& x) const {
    using std::abs;
    using std::pow;
    const int n = order_;
    Real rho(1e6);
    for (int k : {n - 1, n}) {
      const Real a = abs(x[k]);
      if (a > 0) {
        const Real r = pow(a, Real(-1) / k);
        if (r < rho) rho = r;
      }
    }
    using std::exp;
    using std::log;
    // Truncation term about tol relative to the scale of the solution.
    return rho * pow(tol_, Real(1) / n) / exp(Real(1));
  }

  /// Jet at t from the coefficients.
  static std::array<Real, 4> evaluate(const std::vector<Real>& x, const Real& t) {
    std::array<Real, 4> out;
    const int M = static_cast<int>(x.size());
    for (int j = 0; j < 4; ++j) {
      Real acc(0);
      for (int k = M - 1 - j; k >= 0; --k) {
        Real c = x[k + j];
        for (int m = 1; m <= j; ++m) c *= Real(k + m);
        acc = acc * t + c;
      }
      out[j] = acc;
    }
    return out;
  }

 private:
  int order_;
  Real tol_;
  Real dm1_, q0_, f0_, g0_, alpha_;
};

}  // namespace biharm
