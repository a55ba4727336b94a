#pragma once

// Dormand-Prince 5(4) embedded pair with Hairer's fourth-order continuous
// extension, on fixed-size states.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>

namespace biharm {

/// Raised when the adaptive step size collapses or the step budget runs out.
/// Distinct from a detected blowup.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double s) : std::runtime_error(what), s_(s) {}
  double s() const { return s_; }

 private:
  double s_;
};

template <std::size_t N>
using VecN = std::array<double, N>;

/// Dense output of one accepted step on [s0, s0 + h].
template <std::size_t N>
struct Dopri5Dense {
  double s0 = 0.0;
  double h = 0.0;
  std::array<VecN<N>, 5> rcont{};

  VecN<N> operator()(double s) const {
    const double th = (s - s0) / h;
    const double th1 = 1.0 - th;
    VecN<N> y;
    for (std::size_t i = 0; i < N; ++i) {
      y[i] = rcont[0][i] + th * (rcont[1][i] + th1 * (rcont[2][i] + th * (rcont[3][i] + th1 * rcont[4][i])));
    }
    return y;
  }
};

struct StepControl {
  double rel_tol = 1e-12;
  double abs_tol = 1e-12;
  double max_step = 0.1;
};

template <std::size_t N, class Field>
class Dopri5 {
 public:
  Dopri5(Field field, StepControl ctl) : f_(std::move(field)), ctl_(ctl) {}

  struct Accepted {
    double s_new;
    VecN<N> y_new;
    Dopri5Dense<N> dense;
  };

  /// Takes one accepted step from (s, y) no further than s_end. The step
  /// size suggestion is carried between calls.
  Accepted step(double s, const VecN<N>& y, double s_end) {
    if (!have_f_ || s != s_f_) {
      f0_ = f_(y);
      s_f_ = s;
      have_f_ = true;
    }
    if (h_ <= 0.0) h_ = initial_step(s, y, f0_, s_end);
    const double span_left = s_end - s;
    for (;;) {
      double h = std::min({h_, ctl_.max_step, span_left});
      const double h_min = 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(s));
      if (h < h_min) throw IntegrationError("step size underflow", s);
      auto [y_new, f_new, err, dense] = attempt(s, y, h);
      if (err <= 1.0 && std::isfinite(err)) {
        const double fac = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
        if (h == span_left) {
          // Clipped step: keep the unclipped suggestion.
          h_ = std::max(h_, h * fac);
        } else {
          h_ = h * fac;
        }
        f0_ = f_new;
        s_f_ = (h == span_left) ? s_end : s + h;
        return {s_f_, y_new, dense};
      }
      const double fac = std::isfinite(err) ? std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9) : 0.1;
      h_ = h * fac;
    }
  }

 private:
  struct Attempt {
    VecN<N> y_new;
    VecN<N> f_new;
    double err;
    Dopri5Dense<N> dense;
  };

  Attempt attempt(double s, const VecN<N>& y, double h) const {
    static constexpr double a21 = 0.2;
    static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
    static constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
    static constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                            a54 = -212.0 / 729.0;
    static constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                            a65 = -5103.0 / 18656.0;
    static constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0, a75 = -2187.0 / 6784.0,
                            a76 = 11.0 / 84.0;
    static constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                            e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
    static constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                            d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                            d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

    const VecN<N>& k1 = f0_;
    VecN<N> t;
    for (std::size_t i = 0; i < N; ++i) t[i] = y[i] + h * a21 * k1[i];
    const VecN<N> k2 = f_(t);
    for (std::size_t i = 0; i < N; ++i) t[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    const VecN<N> k3 = f_(t);
    for (std::size_t i = 0; i < N; ++i) t[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    const VecN<N> k4 = f_(t);
    for (std::size_t i = 0; i < N; ++i) t[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    const VecN<N> k5 = f_(t);
    for (std::size_t i = 0; i < N; ++i) {
      t[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    }
    const VecN<N> k6 = f_(t);
    VecN<N> y_new;
    for (std::size_t i = 0; i < N; ++i) {
      y_new[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    }
    const VecN<N> k7 = f_(y_new);

    double acc = 0.0;
    bool finite = true;
    for (std::size_t i = 0; i < N; ++i) {
      const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double sc = ctl_.abs_tol + ctl_.rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
      acc += (e / sc) * (e / sc);
      finite = finite && std::isfinite(y_new[i]);
    }
    const double err = finite ? std::sqrt(acc / static_cast<double>(N)) : std::numeric_limits<double>::infinity();

    Dopri5Dense<N> dense;
    dense.s0 = s;
    dense.h = h;
    for (std::size_t i = 0; i < N; ++i) {
      const double dy = y_new[i] - y[i];
      const double bspl = h * k1[i] - dy;
      dense.rcont[0][i] = y[i];
      dense.rcont[1][i] = dy;
      dense.rcont[2][i] = bspl;
      dense.rcont[3][i] = dy - h * k7[i] - bspl;
      dense.rcont[4][i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
    }
    return {y_new, k7, err, dense};
  }

  // Hairer & Wanner's starting step heuristic.
  double initial_step(double s, const VecN<N>& y, const VecN<N>& f0, double s_end) const {
    double dnf = 0.0, dny = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sc = ctl_.abs_tol + ctl_.rel_tol * std::abs(y[i]);
      dnf += (f0[i] / sc) * (f0[i] / sc);
      dny += (y[i] / sc) * (y[i] / sc);
    }
    double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : std::sqrt(dny / dnf) * 0.01;
    h = std::min({h, ctl_.max_step, s_end - s});
    VecN<N> y1;
    for (std::size_t i = 0; i < N; ++i) y1[i] = y[i] + h * f0[i];
    const VecN<N> f1 = f_(y1);
    double der2 = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sc = ctl_.abs_tol + ctl_.rel_tol * std::abs(y[i]);
      der2 += ((f1[i] - f0[i]) / sc) * ((f1[i] - f0[i]) / sc);
    }
    der2 = std::sqrt(der2) / h;
    const double der12 = std::max(std::abs(der2), std::sqrt(dnf));
    const double h1 = der12 <= 1e-15 ? std::max(1e-6, h * 1e-3) : std::pow(0.01 / der12, 0.2);
    return std::max(std::min({100.0 * h, h1, ctl_.max_step}), 1e-12);
  }

  Field f_;
  StepControl ctl_;
  double h_ = 0.0;
  VecN<N> f0_{};
  double s_f_ = 0.0;
  bool have_f_ = false;
};

}  // namespace biharm
