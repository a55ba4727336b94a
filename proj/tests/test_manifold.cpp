#include <doctest.h>

#include <map>
#include <sstream>

#include "biharm/manifold.hpp"
#include "biharm/regions.hpp"

using namespace biharm;

namespace {

const double c5 = 2 * std::sqrt(6.0);

const HeteroclinicResult& heteroclinic(double eps0) {
  static std::map<double, HeteroclinicResult> cache;
  auto it = cache.find(eps0);
  if (it == cache.end()) {
    const auto br = default_bracket(eps0);
    ShootOptions o;
    o.eps0 = eps0;
    it = cache.emplace(eps0, find_heteroclinic(br[0], br[1], defaults::kThetaTol, IntegrationConfig{}, o)).first;
  }
  return it->second;
}

}  // namespace

TEST_CASE("local chart") {
  const auto L = linearization(Dimension(5), Parity::Even);
  for (const Vec4& eta : {LocalChart::eta3, LocalChart::eta4}) {
    const double lam = eta[1];
    for (int r = 0; r < 4; ++r) {
      double acc = 0;
      for (int c = 0; c < 4; ++c) acc += L.matrix[r][c] * eta[c];
      CHECK(acc == doctest::Approx(lam * eta[r]));
    }
  }
  CHECK(LocalChart::DW0[0][0] == 3.0 / 4);
  CHECK(LocalChart::DW0[0][1] == 1.0 / 4);
  CHECK(LocalChart::DW0[1][0] == -9.0 / 4);
  CHECK(LocalChart::DW0[1][1] == 13.0 / 4);
}

TEST_CASE("seed states") {
  const double e = 1e-3;
  const State a = seed_state({e, 0.0});
  CHECK(a.phi == e);
  CHECK(a.dphi == doctest::Approx(0.75 * e));
  CHECK(a.d2phi == 0.0);
  CHECK(a.d3phi == doctest::Approx(-2.25 * e));
  const State b = seed_state({e, kPi / 2});
  CHECK(std::abs(b.phi) < 1e-18);
  CHECK(b.dphi == doctest::Approx(0.25 * e));
  CHECK(b.d2phi == doctest::Approx(e));
  CHECK(b.d3phi == doctest::Approx(3.25 * e));
  for (double th : {0.1, 1.0, 2.5, -1.2}) {
    const State p = seed_state({e, th}), q = seed_state({e, th + kPi});
    CHECK(p.phi == doctest::Approx(-q.phi));
    CHECK(p.dphi == doctest::Approx(-q.dphi));
    CHECK(p.d2phi == doctest::Approx(-q.d2phi));
    CHECK(p.d3phi == doctest::Approx(-q.d3phi));
  }
  CHECK_THROWS_AS(seed_state({0.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(seed_state({0.2, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(seed_state({1e-3, NAN}), std::invalid_argument);
}

TEST_CASE("theta0") {
  CHECK(std::abs(theta0(1e-6) - std::atan(c5)) < 1e-9);
  for (double e : {1e-6, 1e-3, 0.05, 0.1}) {
    const double t = theta0(e);
    CHECK(t >= 0);
    CHECK(t <= kPi / 2);
    const State s = seed_state({e, t});
    CHECK(std::abs(s.d2phi - U0(s.phi)) < 1e-12);
    const State above = seed_state({e, t + 1e-4}), below = seed_state({e, t - 1e-4});
    CHECK(in_region_C(above.phi, above.d2phi, 0.0) == RegionClass::Outside);
    CHECK(in_region_C(below.phi, below.d2phi, 0.0) == RegionClass::Inside);
  }
}

TEST_CASE("classification examples") {
  const IntegrationConfig cfg;
  const double t0 = theta0(kDefaultEps0);
  const auto plus = classify_orbit({kDefaultEps0, t0 + 0.05}, cfg);
  CHECK(plus.outcome == Outcome::BlowupPlus);
  CHECK(plus.g == 1);
  REQUIRE(plus.tau);
  CHECK(plus.end_state.d2phi == doctest::Approx(c5).epsilon(1e-8));

  const auto minus = classify_orbit({kDefaultEps0, -kPi / 2}, cfg);
  CHECK(minus.outcome == Outcome::BlowupMinus);
  CHECK(minus.g == -1);
  CHECK(minus.end_state.d2phi == doctest::Approx(-c5).epsilon(1e-8));

  for (double th : {t0 + 0.05, -kPi / 2, 0.2, 1.0}) {
    const auto a = classify_orbit({kDefaultEps0, th}, cfg);
    const auto b = classify_orbit({kDefaultEps0, th + kPi}, cfg);
    REQUIRE(a.g);
    REQUIRE(b.g);
    CHECK(*a.g == -*b.g);
    CHECK(*a.tau == doctest::Approx(*b.tau).epsilon(1e-6));
  }
}

TEST_CASE("g changes sign exactly once on a grid") {
  const auto grid = classify_grid(-kPi / 2, theta0(kDefaultEps0), defaults::kGridPoints, kDefaultEps0,
                                  IntegrationConfig{});
  REQUIRE(grid.size() == 200);
  CHECK(grid.front().g == -1);
  CHECK(grid.back().g == 1);
  CHECK(count_sign_changes(grid) == 1);
  for (std::size_t i = 1; i < grid.size(); ++i) CHECK(grid[i].theta > grid[i - 1].theta);
  for (const auto& r : grid) {
    if (r.outcome == Outcome::BlowupPlus) CHECK(r.g == 1);
    if (r.outcome == Outcome::BlowupMinus) CHECK(r.g == -1);
  }

  const auto again = classify_grid(-kPi / 2, theta0(kDefaultEps0), defaults::kGridPoints, kDefaultEps0,
                                   IntegrationConfig{}, 1);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(again[i].outcome == grid[i].outcome);
    CHECK(again[i].tau == grid[i].tau);
  }

  std::ostringstream os;
  write_grid_csv(grid, os);
  CHECK(os.str().rfind("theta,outcome,g,tau,end_s,phi,dphi,d2phi,d3phi\n", 0) == 0);
}

TEST_CASE("|phi''| stays above 2 sqrt(6) after tau") {
  const auto grid = classify_grid(-kPi / 2, kPi / 2, 24, kDefaultEps0, IntegrationConfig{});
  for (const auto& r : grid) {
    if (!r.tau) continue;
    const auto t = integrate(Dimension(5), r.end_state, r.end_s, IntegrationConfig{});
    CHECK(t.termination.kind == TerminationKind::BlowupDetected);
    for (const auto& s : t.samples) CHECK(std::abs(s.state.d2phi) >= c5 - 1e-9);
  }
}

TEST_CASE("decay in reversed time") {
  const auto gen = verify_unstable_decay({kDefaultEps0, 0.3}, IntegrationConfig{});
  CHECK(gen.rate1 >= 0.9);
  CHECK(gen.rate1 <= 1.1);
  CHECK(gen.window1 > 10);
  const auto fast = verify_unstable_decay({kDefaultEps0, kPi / 2}, IntegrationConfig{});
  CHECK(fast.rate2 >= 2.7);
  CHECK(fast.rate2 <= 3.3);
  CHECK(fast.window2 > 10);

  // The linear chart is off by O(eps0^3); the stable directions amplify that
  // error in reversed time, so the floor of the decay scales like eps0^3.
  for (double th : {0.3, 1.0, kPi / 2, 2.5}) {
    const auto d = verify_unstable_decay({1e-6, th}, IntegrationConfig{});
    CHECK(d.min_norm < 1e-8);
  }
}

TEST_CASE("reversed-time orbits stay in C or -C") {
  for (int k = 0; k < 16; ++k) {
    const double th = -kPi + 2 * kPi * (k + 0.5) / 16;
    const auto d = verify_unstable_decay({kDefaultEps0, th}, IntegrationConfig{});
    CAPTURE(th);
    CHECK(d.stayed_in_C_or_minus_C);
  }
}

TEST_CASE("bracket without a sign change is rejected") {
  const double t0 = theta0(kDefaultEps0);
  CHECK_THROWS_AS(find_heteroclinic(t0 + 0.05, t0 + 0.1, 1e-10, IntegrationConfig{}), std::invalid_argument);
}

TEST_CASE("heteroclinic orbit") {
  const auto& h = heteroclinic(kDefaultEps0);
  CHECK(h.theta_lo <= h.theta_star);
  CHECK(h.theta_star <= h.theta_hi);
  CHECK(h.theta_hi - h.theta_lo < 1e-10);
  CHECK(h.result.outcome == Outcome::HeteroclinicCandidate);
  CHECK(h.end_distance < kHeteroclinicTol);
  CHECK(h.trajectory.s_end() >= 25.0);
  CHECK(h.track_in_C);
  CHECK(track_in_region_C(h.trajectory));

  const double e0 = energy(Dimension(5), h.trajectory.samples.front().state).total;
  const double e1 = energy(Dimension(5), h.trajectory.final_state()).total;
  CHECK(std::abs(e0) < 1e-3);
  CHECK(e1 == doctest::Approx(12.0).epsilon(1e-3));
  double prev = e0;
  for (const auto& s : h.trajectory.samples) {
    const double en = energy(Dimension(5), s.state).total;
    CHECK(en >= prev - 1e-8);
    prev = en;
  }
}

TEST_CASE("heteroclinic end state is stable under halving eps0") {
  const auto& a = heteroclinic(kDefaultEps0);
  const auto& b = heteroclinic(kDefaultEps0 / 2);
  CHECK(b.result.outcome == Outcome::HeteroclinicCandidate);
  CHECK((a.result.end_state - b.result.end_state).norm() < 1e-2);
}
