#include <doctest.h>

#include <sstream>

#include "biharm/manifold.hpp"
#include "biharm/profile.hpp"

using namespace biharm;

namespace {

const HeteroclinicResult& heteroclinic() {
  static const HeteroclinicResult h = [] {
    const auto br = default_bracket(kDefaultEps0);
    return find_heteroclinic(br[0], br[1], defaults::kThetaTol, IntegrationConfig{});
  }();
  return h;
}

RadialProfile heteroclinic_profile() {
  return to_radial(std::make_shared<const Trajectory>(heteroclinic().trajectory));
}

WindingResult winding(double blowup_norm) {
  IntegrationConfig c;
  c.blowup_norm = blowup_norm;
  return build_winding_profile(c);
}

}  // namespace

TEST_CASE("zero trajectory") {
  IntegrationConfig c;
  c.max_span = 3;
  const auto t = std::make_shared<const Trajectory>(integrate(Dimension(5), {}, 0.0, c));
  const auto p = to_radial(t);
  CHECK(p.samples.back().r == doctest::Approx(1.0));
  for (const auto& s : p.samples) {
    CHECK(s.psi == 0.0);
    CHECK(s.dpsi == 0.0);
    CHECK(s.d2psi == 0.0);
    const auto L = laplacian_components(Dimension(5), p, s.r);
    CHECK(L.L0f0 == 0.0);
    CHECK(L.L1f1 == 0.0);
  }
  CHECK_THROWS_AS(to_radial(t, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(radial_at(p, 2.0), std::out_of_range);
  CHECK_THROWS_AS(laplacian_components(Dimension(4), p, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(blowup_diagnostics(*t), std::invalid_argument);

  const auto g = to_radial(t, std::nullopt, 0.25);
  CHECK(g.samples.size() == 13);
  CHECK(g.samples[1].r / g.samples[0].r == doctest::Approx(std::exp(0.25)));
}

TEST_CASE("chain rule") {
  const State x{0.3, 0.5, -0.2, 0.7};
  const auto j = radial_sample(1.0, x, 2.0);
  const double r = std::exp(-1.0);
  CHECK(j.r == doctest::Approx(r));
  CHECK(j.psi == 0.3);
  CHECK(j.dpsi == doctest::Approx(0.5 / r));
  CHECK(j.d2psi == doctest::Approx((-0.2 - 0.5) / (r * r)));
}

TEST_CASE("linear profile has a finite Laplacian at the origin") {
  for (int d = 5; d <= 7; ++d) {
    const double c = 0.7;
    for (double r : {1e-3, 1e-5, 1e-7}) {
      const auto L = laplacian_parts(Dimension(d), {r, c * r, c, 0.0});
      CHECK(std::abs(L.L0f0) < 10 * r);
      CHECK(L.L1f1 == doctest::Approx(-d * c * c).epsilon(1e-4));
    }
  }
}

TEST_CASE("heteroclinic profile") {
  const auto p = heteroclinic_profile();
  REQUIRE(p.samples.size() > 100);
  CHECK(p.psi0 == 0.0);
  for (std::size_t i = 1; i < p.samples.size(); ++i) CHECK(p.samples[i].r > p.samples[i - 1].r);
  CHECK(p.samples.back().r == doctest::Approx(1.0));
  CHECK(std::abs(p.samples.back().psi - kPi / 2) < 1e-3);
  for (const auto& s : p.samples) CHECK(s.psi > 0.0);

  // psi(r) ~ psi'(0) r near the origin.
  const double rmin = p.samples.front().r, slope = p.samples.front().psi / rmin;
  CHECK(std::abs(p.samples.front().psi) < 1e-3);
  for (const auto& s : p.samples) {
    if (s.r > 10 * rmin) break;
    CHECK(std::abs(s.psi / s.r / slope - 1) < 1e-3);
  }

  // |psi''| <= C r^0.9 near 0, with C fitted on the outer part of the window.
  double C = 0;
  for (const auto& s : p.samples)
    if (s.r >= rmin * std::exp(5.0) && s.r <= rmin * std::exp(10.0)) C = std::max(C, std::abs(s.d2psi) / std::pow(s.r, 0.9));
  REQUIRE(C > 0);
  for (const auto& s : p.samples)
    if (s.r < rmin * std::exp(5.0)) CHECK(std::abs(s.d2psi) <= C * std::pow(s.r, 0.9));

  // Laplacian bounded, settling as r -> 0.
  double sup = 0;
  for (const auto& s : p.samples) {
    const auto L = laplacian_components(Dimension(5), p, s.r);
    CHECK(std::isfinite(L.L0f0));
    CHECK(std::isfinite(L.L1f1));
    sup = std::max(sup, std::hypot(L.L0f0, L.L1f1));
  }
  const auto a = laplacian_components(Dimension(5), p, rmin), b = laplacian_components(Dimension(5), p, rmin * std::exp(1.0));
  CHECK(std::hypot(a.L0f0 - b.L0f0, a.L1f1 - b.L1f1) < 1e-2 * std::hypot(a.L0f0, a.L1f1));
  CHECK(std::hypot(a.L0f0, a.L1f1) <= sup);

  std::ostringstream os;
  write_profile_csv(p, Dimension(5), os);
  CHECK(os.str().rfind("r,psi,dpsi,d2psi,L0f0,L1f1\n", 0) == 0);
}

TEST_CASE("psi'' matches finite differences of psi'") {
  const auto p = heteroclinic_profile();
  for (std::size_t i = 1; i + 1 < p.samples.size(); i += 5) {
    const double r = p.samples[i].r, h = 1e-4 * r;
    const double fd = (radial_at(p, r + h).dpsi - radial_at(p, r - h).dpsi) / (2 * h);
    const auto j = radial_at(p, r);
    CHECK(std::abs(fd - j.d2psi) <= 1e-4 * std::max(std::abs(j.d2psi), std::abs(j.dpsi) / r));
  }
}

TEST_CASE("radial equation holds along the pulled-back jets") {
  const auto& h = heteroclinic();
  const double shift = h.trajectory.s_end();
  const Dimension d5(5);
  for (double scale : {0.0, 10.0}) {
    // Shifting further moves the same orbit toward r = 0.
    const double sh = shift + scale;
    double worst = 0;
    for (const auto& s : h.trajectory.samples) {
      const double r = std::exp(s.s - sh);
      if (r < 1e-4 && scale == 0.0) continue;
      const auto jet = radial_jet(d5, r, s.state);
      const Vec4 f = vector_field(d5, s.state);
      const double size = (s.state.norm() + std::abs(f[3])) / std::pow(r, 4);
      worst = std::max(worst, std::abs(psi_residual(d5, r, jet)) / std::max(1.0, size));
    }
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("blowup diagnostics") {
  const auto a = winding(1e8), b = winding(1e10);
  const auto& da = a.diagnostics;
  CHECK(da.fit_r2 > 0.999);
  CHECK(da.s_f_estimate > a.trajectory->s_end());
  CHECK(std::abs(da.s_f_estimate - b.diagnostics.s_f_estimate) < 0.01 * std::abs(da.s_f_estimate));
  REQUIRE(!da.lambda.empty());
  const double lmax = da.lambda.back();
  double v1lo = 1e300, v1hi = 0, v2lo = 1e300, v2hi = 0;
  for (std::size_t i = 0; i < da.lambda.size(); ++i) {
    if (da.lambda[i] < lmax / 10) continue;
    v1lo = std::min(v1lo, da.v1[i]);
    v1hi = std::max(v1hi, da.v1[i]);
    v2lo = std::min(v2lo, da.v2[i]);
    v2hi = std::max(v2hi, da.v2[i]);
    CHECK(da.zeta[i] > 0);
  }
  CHECK(v1lo > 0);
  CHECK(v2lo > 0);
  CHECK(v1hi < 10);
  CHECK(v2hi < 10);
  for (std::size_t i = 0; i < da.lambda.size(); ++i) {
    CHECK(da.lambda[i] == doctest::Approx(std::cbrt(sample_at(*a.trajectory, da.s[i]).d3phi)));
  }
}

TEST_CASE("winding profile") {
  const auto a = winding(1e8), b = winding(1e10), c = winding(1e17);
  CHECK(b.report.winding_count >= a.report.winding_count);
  CHECK(c.report.winding_count >= b.report.winding_count);
  CHECK(a.report.winding_count >= 1);
  CHECK(a.report.winding_count == static_cast<int>(a.report.crossings.size()));
  CHECK(std::abs(a.profile.samples.front().psi) < 1e-3);
  // Blowup sits at r = 1, just beyond the last sample.
  CHECK(a.profile.shift == doctest::Approx(a.diagnostics.s_f_estimate));
  CHECK(a.profile.samples.back().r <= 1.0);
  CHECK(a.profile.samples.back().r > 0.99);
  CHECK(a.report.theta == doctest::Approx(theta0(kDefaultEps0) + defaults::kWindingOffset));

  const auto& cr = c.report.crossings;
  REQUIRE(cr.size() >= 3);
  for (std::size_t i = 1; i < cr.size(); ++i) CHECK(cr[i] > cr[i - 1]);
  for (std::size_t i = 2; i < cr.size(); ++i) CHECK(cr[i] - cr[i - 1] < cr[i - 1] - cr[i - 2]);
  for (std::size_t k = 0; k < cr.size(); ++k) {
    const State x = sample_at(*c.trajectory, cr[k]);
    const double phi = c.report.reflected ? -x.phi : x.phi;
    CHECK(phi == doctest::Approx((k + 1) * kPi).epsilon(1e-8));
  }

  IntegrationConfig shortspan;
  shortspan.max_span = 1.0;
  CHECK_THROWS_AS(build_winding_profile(shortspan), NoBlowupError);
}
