#include <doctest.h>

#include <random>

#include "biharm/regions.hpp"

using namespace biharm;

namespace {

const double s6 = std::sqrt(6.0);

// P and a written out as displayed, term by term.
double P_ref(double p0, double p, double v) {
  return -12 * std::sin(2 * p0) - 12 * (p - p0 + std::sin(2 * p)) +
         2 * s6 * (p - p0) * (4 * std::cos(2 * p) + 9) * std::cos(p0) + 12 * (p0 - p) * std::cos(2 * p0) +
         2 * s6 * (4 * std::cos(2 * p) + 9) * std::sin(p0) + (4 * std::cos(2 * p) - 4 * s6 * std::cos(p0) + 10) * v +
         (12 * s6 * (std::sin(p0) + (p - p0) * std::cos(p0)) - 4 * std::sin(2 * p)) * v * v + 2 * v * v * v;
}

double a_ref(double p0, double p, double v) { return 4 * std::cos(2 * p) - 2 * s6 * std::cos(p0) + 9 + 6 * v * v; }

double Q_ref(double p, double v) {
  const double c = std::cos(p);
  return 2 * v * v * v + (18 * p - 4 * std::sin(2 * p)) * v * v + 8 * c * c * v +
         6 * (3 * p - 2 * std::sin(2 * p) + 2 * p * std::cos(2 * p));
}

Trajectory random_orbit(std::mt19937_64& rng, double span = 3.0) {
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  IntegrationConfig c;
  c.max_span = span;
  c.blowup_norm = 1e4;
  return integrate(Dimension(5), {u(rng), u(rng), u(rng), u(rng)}, 0.0, c);
}

}  // namespace

TEST_CASE("region C membership") {
  CHECK(in_region_C(kPi / 2, 0) == RegionClass::Inside);
  CHECK(in_region_C(0, 0) != RegionClass::Inside);
  CHECK(in_region_C(kPi / 4, 2 * s6 * std::sin(kPi / 4)) == RegionClass::Boundary);
  CHECK(in_region_C(kPi / 2, 2 * s6 + 1) == RegionClass::Outside);
  CHECK(in_region_C(-0.1, 0) == RegionClass::Outside);
  CHECK(in_minus_C(-kPi / 2, 0) == RegionClass::Inside);
  CHECK(in_minus_C(kPi / 2, 0) == RegionClass::Outside);
  CHECK(region_F(kPi / 2) == doctest::Approx(2 * s6));
  CHECK(region_F(2.0) == doctest::Approx(2 * s6));
  CHECK(region_F(0.3) == doctest::Approx(U0(0.3)));
  // Continuity at pi/2.
  CHECK(std::abs(region_F(kPi / 2 - 1e-9) - region_F(kPi / 2 + 1e-9)) < 1e-8);
  // Lower boundary is the reflection of the upper one.
  CHECK(in_region_C(0.5, -region_F(kPi - 0.5)) == RegionClass::Boundary);
}

TEST_CASE("region margin sign matches the set definition") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ux(-0.5, 3.7), uy(-6, 6);
  for (int i = 0; i < 100000; ++i) {
    const double x = ux(rng), y = uy(rng);
    const bool inside = x > 0 && x < kPi && -region_F(kPi - x) < y && y < region_F(x);
    const double m = region_c_margin(x, y);
    if (std::abs(m) > 1e-12) CHECK((m > 0) == inside);
  }
}

TEST_CASE("tangent frame") {
  for (double p0 : {0.0, 0.3, 1.0, 1.5}) {
    const TangentFrame f(p0);
    CHECK(f.y0 == doctest::Approx(U0(p0)));
    CHECK(f.line(f.phi_max) == doctest::Approx(2 * s6).epsilon(1e-12));
  }
  CHECK(TangentFrame(kPi / 2).phi_max == kPi / 2);
}

TEST_CASE("a and P examples") {
  CHECK(eval_P(0, 0, 1) == doctest::Approx(16 - 4 * s6).epsilon(1e-14));
  CHECK(eval_P(0, 0, 0) == 0.0);
  CHECK(eval_a(0, 0, 0) == doctest::Approx(13 - 2 * s6).epsilon(1e-14));
}

TEST_CASE("a, P, Q agree with the displayed formulas") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ua(0, kPi / 2), ub(-1, 3), uv(-3, 3);
  for (int i = 0; i < 100000; ++i) {
    const double p0 = ua(rng), p = ub(rng), v = uv(rng);
    const double pr = P_ref(p0, p, v);
    CHECK(std::abs(eval_P(p0, p, v) - pr) < 1e-11 * std::max(1.0, std::abs(pr)));
    const auto c = P_cubic(p0, p);
    CHECK(c[3] == 2.0);
    CHECK(std::abs(c[0] + v * (c[1] + v * (c[2] + v * c[3])) - pr) < 1e-11 * std::max(1.0, std::abs(pr)));
    CHECK(eval_a(p0, p, v) == doctest::Approx(a_ref(p0, p, v)).epsilon(1e-14));
    const double q = Q_ref(p, v);
    CHECK(std::abs(eval_Q(p, v) - q) < 1e-11 * std::max(1.0, std::abs(q)));
    const auto qc = Q_cubic(p);
    CHECK(std::abs(qc[0] + v * (qc[1] + v * (qc[2] + v * qc[3])) - q) < 1e-11 * std::max(1.0, std::abs(q)));
  }
}

TEST_CASE("Q examples") {
  CHECK(eval_Q(0, 0) == 0.0);
  CHECK(eval_Q(0, 1) == doctest::Approx(10.0).epsilon(1e-15));
}

TEST_CASE("w and xi systems are consistent with the d = 5 equation") {
  IntegrationConfig c;
  c.max_span = 2;
  const auto zero = integrate(Dimension(5), {}, 0.0, c);
  CHECK(w_system_residual(0.0, zero) == 0.0);
  std::mt19937_64 rng(6);
  for (int i = 0; i < 20; ++i) {
    const auto t = random_orbit(rng);
    CHECK(w_system_residual(0.3, t) < 1e-8);
    CHECK(w_system_residual(kPi / 2, t) < 1e-8);
    CHECK(w_system_residual(0.0, t) < 1e-8);
    CHECK(xi_system_residual(t) < 1e-8);
  }
  const auto d6 = integrate(Dimension(6), {0.1, 0, 0, 0}, 0.0, c);
  CHECK_THROWS_AS(w_system_residual(0.3, d6), std::invalid_argument);
  CHECK_THROWS_AS(xi_system_residual(d6), std::invalid_argument);
}

TEST_CASE("sum of squares identity") {
  auto a = sos_identity_check(0, 0);
  CHECK(a.lhs == 0.0);
  CHECK(a.rhs == 0.0);
  a = sos_identity_check(1, 0);
  CHECK(a.lhs == doctest::Approx(1.0));
  CHECK(a.rhs == doctest::Approx(1.0));
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1, 1);
  double worst = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto s = sos_identity_check(u(rng), u(rng));
    worst = std::max(worst, std::abs(s.lhs - s.rhs));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("growth sandwich") {
  const BlowupStructure b(Dimension(5));
  CHECK(b.alpha == 2.0);
  CHECK(b.beta == 6.0);
  CHECK(b.c0 == doctest::Approx(2 * s6));
  CHECK(b.p(0, 0, b.c0) >= b.lower(0, b.c0, kGrowthC1));
  for (int d = 5; d <= 7; ++d) {
    const auto r = growth_bound_check(Dimension(d), 100000);
    CHECK(r.samples == 100000);
    CHECK(r.lower_violations == 0);
    CHECK(r.upper_violations == 0);
  }
  // p written out for d = 5: phi'''' + 2 phi''' in terms of (phi, phi', phi'').
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int i = 0; i < 1000; ++i) {
    const State x{u(rng), u(rng), u(rng), u(rng)};
    CHECK(b.p(x.phi, x.dphi, x.d2phi) ==
          doctest::Approx(fourth_derivative(Dimension(5), x) + 2 * x.d3phi).epsilon(1e-12));
  }
}

TEST_CASE("cone K") {
  CHECK(in_cone_K(0, 0));
  CHECK(in_cone_K(1, 3));
  CHECK_FALSE(in_cone_K(1, 2.9));
  CHECK_FALSE(in_cone_K(-0.1, 1));
  const State x{0.1, 0.2, 0.5, 0.7};
  CHECK(state_in_cone(x) == (x.phi >= 0 && x.dphi >= 0 && xi(x) >= 0 && dxi(x) >= 0));
  CHECK(xi(x) == doctest::Approx(0.5 - 0.3));
  CHECK(dxi(x) == doctest::Approx(0.7 - 0.6));
}

TEST_CASE("cone invariance and blowup") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0, 1);
  IntegrationConfig c;
  c.max_span = 50;
  int blew_up = 0;
  for (int i = 0; i < 1000; ++i) {
    const double p = u(rng), v = u(rng), x = u(rng), dx = u(rng);
    const State s0{p, v, x + 3 * p, dx + 3 * v};
    const auto t = integrate(Dimension(5), s0, 0.0, c);
    bool positive = true, reached = false;
    for (std::size_t k = 1; k < t.samples.size(); ++k) {
      const State& y = t.samples[k].state;
      positive = positive && y.phi > 0 && y.dphi > 0 && xi(y) > 0 && dxi(y) > 0;
      reached = reached || (y.d2phi >= 2 * s6 && y.dphi > 0 && y.d3phi > 0);
    }
    CHECK(positive);
    CHECK(reached);
    blew_up += t.termination.kind == TerminationKind::BlowupDetected;
  }
  CHECK(blew_up == 1000);
}

TEST_CASE("P positive and a bounded below on the tangent-frame domain") {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(0, 1);
  int bad_P = 0, bad_a = 0;
  for (int i = 0; i < 100000; ++i) {
    const double p0 = kPi / 2 * u(rng);
    const TangentFrame f(p0);
    const double p = p0 + (f.phi_max - p0) * u(rng);
    const double v = 5 * u(rng);
    if (p0 == 0 && p == 0 && v == 0) continue;
    bad_P += v > 0 && !(eval_P(p0, p, v) > 0);
    bad_a += !(eval_a(p0, p, 3 * (u(rng) - 0.5)) >= 0.1);
  }
  CHECK(bad_P == 0);
  CHECK(bad_a == 0);
}
