#include "biharm/regions.hpp"

#include <algorithm>
#include <random>

namespace biharm {

namespace {
void require_d5(const Trajectory& traj) {
  if (traj.d.value() != 5) throw std::invalid_argument("system residuals are defined for d = 5 only");
}

State forward_jet(const Trajectory& traj, const State& x) { return traj.reversed ? time_reverse(x) : x; }
}  // namespace

std::string to_string(RegionClass c) {
  switch (c) {
    case RegionClass::Inside: return "Inside";
    case RegionClass::Boundary: return "Boundary";
    case RegionClass::Outside: return "Outside";
  }
  return "?";
}

double U0(double phi0) { return kTwoSqrt6 * std::sin(phi0); }

double region_F(double x) {
  x = std::clamp(x, 0.0, kPi);
  return x <= kPi / 2 ? U0(x) : kTwoSqrt6;
}

double region_c_margin(double x, double y) {
  return std::min({x, kPi - x, region_F(x) - y, y + region_F(kPi - x)});
}

RegionClass in_region_C(double x, double y, double tol) {
  const double m = region_c_margin(x, y);
  if (std::abs(m) <= tol) return RegionClass::Boundary;
  return m > 0.0 ? RegionClass::Inside : RegionClass::Outside;
}

RegionClass in_minus_C(double x, double y, double tol) { return in_region_C(-x, -y, tol); }

TangentFrame::TangentFrame(double p0)
    : phi0(p0), y0(U0(p0)), slope(kTwoSqrt6 * std::cos(p0)) {
  if (!(p0 >= 0.0 && p0 <= kPi / 2)) throw std::invalid_argument("phi0 must lie in [0, pi/2]");
  phi_max = p0 == kPi / 2 ? kPi / 2 : p0 + std::cos(p0) / (1.0 + std::sin(p0));
}

double eval_a(double phi0, double phi, double v) {
  return 4.0 * std::cos(2.0 * phi) - kTwoSqrt6 * std::cos(phi0) + 9.0 + 6.0 * v * v;
}

std::array<double, 4> P_cubic(double phi0, double phi) {
  const double c2p = std::cos(2.0 * phi), s2p = std::sin(2.0 * phi);
  const double s0 = std::sin(phi0), c0 = std::cos(phi0);
  const double dp = phi - phi0;
  const double k0 = -12.0 * std::sin(2.0 * phi0) - 12.0 * (dp + s2p) + kTwoSqrt6 * dp * (4.0 * c2p + 9.0) * c0 -
                    12.0 * dp * std::cos(2.0 * phi0) + kTwoSqrt6 * (4.0 * c2p + 9.0) * s0;
  const double k1 = 4.0 * c2p - 4.0 * kSqrt6 * c0 + 10.0;
  const double k2 = 12.0 * kSqrt6 * (s0 + dp * c0) - 4.0 * s2p;
  return {k0, k1, k2, 2.0};
}

double eval_P(double phi0, double phi, double v) {
  const auto c = P_cubic(phi0, phi);
  return c[0] + v * (c[1] + v * (c[2] + v * c[3]));
}

double w_system_residual(double phi0, const Trajectory& traj) {
  require_d5(traj);
  const TangentFrame fr(phi0);
  double worst = 0.0;
  for (const auto& smp : traj.samples) {
    const State x = forward_jet(traj, smp.state);
    const double w = fr.w(x);
    const double dw = fr.dw(x);
    const double d2w = fourth_derivative(traj.d, x) - fr.slope * x.d2phi;
    const double res = d2w - (eval_a(phi0, x.phi, x.dphi) * w - 2.0 * dw + eval_P(phi0, x.phi, x.dphi));
    worst = std::max(worst, std::abs(res));
  }
  return worst;
}

std::array<double, 4> Q_cubic(double phi) {
  const double c = std::cos(phi);
  const double s2 = std::sin(2.0 * phi);
  return {6.0 * (3.0 * phi - 2.0 * s2 + 2.0 * phi * std::cos(2.0 * phi)), 8.0 * c * c, 18.0 * phi - 4.0 * s2, 2.0};
}

double eval_Q(double phi, double v) {
  const auto c = Q_cubic(phi);
  return c[0] + v * (c[1] + v * (c[2] + v * c[3]));
}

double xi(const State& x) { return x.d2phi - 3.0 * x.phi; }
double dxi(const State& x) { return x.d3phi - 3.0 * x.dphi; }

double xi_system_residual(const Trajectory& traj) {
  require_d5(traj);
  double worst = 0.0;
  for (const auto& smp : traj.samples) {
    const State x = forward_jet(traj, smp.state);
    const double v = x.dphi;
    const double d2xi = fourth_derivative(traj.d, x) - 3.0 * x.d2phi;
    const double res =
        d2xi - ((6.0 * v * v + 4.0 * std::cos(2.0 * x.phi) + 6.0) * xi(x) - 2.0 * dxi(x) + eval_Q(x.phi, v));
    worst = std::max(worst, std::abs(res));
  }
  return worst;
}

bool in_cone_K(double x, double y) { return x >= 0.0 && y >= 3.0 * x; }

bool state_in_cone(const State& x) { return in_cone_K(x.phi, x.d2phi) && in_cone_K(x.dphi, x.d3phi); }

SosCheck sos_identity_check(double y, double v) {
  const double v2 = v * v;
  const double lhs = y * y - 4.0 * y * v + 7.0 * v2 + 3.0 * v2 * v2;
  const double t = v - 2.0 * y / 7.0;
  const double rhs = 3.0 * v2 * v2 + 7.0 * t * t + 3.0 * y * y / 7.0;
  return {lhs, rhs};
}

BlowupStructure::BlowupStructure(Dimension dim)
    : alpha(2.0 * (dim.real() - 4.0)), beta(6.0), c0(c_star(dim)), d(dim) {}

double BlowupStructure::p(double xi0, double xi1, double xi2) const {
  return coeff_q(d, xi0) * xi2 - coeff_f(d, xi0) + beta * xi2 * xi1 * xi1 + 0.5 * coeff_dq(d, xi0) * xi1 * xi1 +
         alpha * coeff_g(d, xi0) * xi1 + alpha * xi1 * xi1 * xi1;
}

double BlowupStructure::lower(double xi1, double xi2, double C1) const {
  return beta * (xi2 - c0) * xi1 * xi1 + xi1 * xi1 * xi1 / C1;
}

double BlowupStructure::upper(double xi1, double xi2, double C1) const {
  return beta * xi1 * xi1 * xi2 + C1 * (1.0 + xi2 + xi1 * xi1 * xi1);
}

GrowthReport growth_bound_check(Dimension d, long samples, double C1, std::uint64_t seed) {
  const BlowupStructure bs(d);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  std::uniform_real_distribution<double> expo(-4.0, 4.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  GrowthReport rep;
  rep.C1 = C1;
  rep.worst_lower_margin = rep.worst_upper_margin = std::numeric_limits<double>::infinity();
  for (long i = 0; i < samples; ++i) {
    const double x0 = ang(rng);
    // A share of samples sit on the edges xi1 = 0 and xi2 = c0.
    const double x1 = unit(rng) < 0.05 ? 0.0 : std::pow(10.0, expo(rng));
    const double x2 = bs.c0 + (unit(rng) < 0.05 ? 0.0 : std::pow(10.0, expo(rng)));
    const double p = bs.p(x0, x1, x2);
    // Relative slack for rounding in the large-magnitude regime.
    const double scale = 1e-12 * (1.0 + std::abs(bs.beta * x1 * x1 * x2) + C1 * (1.0 + x2 + x1 * x1 * x1));
    const double ml = p - bs.lower(x1, x2, C1);
    const double mu = bs.upper(x1, x2, C1) - p;
    rep.worst_lower_margin = std::min(rep.worst_lower_margin, ml);
    rep.worst_upper_margin = std::min(rep.worst_upper_margin, mu);
    if (ml < -scale) ++rep.lower_violations;
    if (mu < -scale) ++rep.upper_violations;
    ++rep.samples;
  }
  return rep;
}

double fit_growth_constant(Dimension d, long samples, std::uint64_t seed) {
  for (double C1 = 1.0; C1 <= 1048576.0; C1 *= 2.0) {
    const auto rep = growth_bound_check(d, samples, C1, seed);
    if (rep.lower_violations == 0 && rep.upper_violations == 0) return C1;
  }
  throw std::runtime_error("no power-of-two growth constant found");
}

}  // namespace biharm
