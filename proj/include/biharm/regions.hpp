#pragma once

// Geometry of the middle region C in the (phi, phi'') plane for d = 5, the
// tangent-line frame and its (phi, w) system, the cone K with the xi system,
// and the structural growth bounds behind the blowup classifier.

#include <array>
#include <cstdint>

#include "biharm/integrator.hpp"
#include "biharm/ode_core.hpp"

namespace biharm {

enum class RegionClass { Inside, Boundary, Outside };

std::string to_string(RegionClass c);

/// U0(phi0) = 2 sqrt(6) sin(phi0).
double U0(double phi0);

/// Upper boundary of C: U0 on [0, pi/2], 2 sqrt(6) on (pi/2, pi]. Arguments
/// outside [0, pi] are clamped.
double region_F(double x);

/// min(x, pi - x, F(x) - y, y + F(pi - x)): positive exactly inside C, zero on
/// the boundary, negative outside.
double region_c_margin(double x, double y);

RegionClass in_region_C(double x, double y, double tol = 1e-9);
/// Membership in -C = {(x, y) : (-x, -y) in C}.
RegionClass in_minus_C(double x, double y, double tol = 1e-9);

/// Tangent line to U0 at phi0 and the offset w = phi'' - y_phi0(phi).
struct TangentFrame {
  double phi0;
  double y0;
  double slope;  // U0'(phi0)
  double phi_max;

  explicit TangentFrame(double phi0);
  double line(double phi) const { return slope * (phi - phi0) + y0; }
  double w(const State& x) const { return x.d2phi - line(x.phi); }
  double dw(const State& x) const { return x.d3phi - slope * x.dphi; }
};

double eval_a(double phi0, double phi, double v);
/// Coefficients (c0, c1, c2, c3) of P(phi0, phi, v) in powers of v.
std::array<double, 4> P_cubic(double phi0, double phi);
double eval_P(double phi0, double phi, double v);

/// Largest |w'' - (a w - 2 w' + P)| over the samples of a d = 5 trajectory.
double w_system_residual(double phi0, const Trajectory& traj);

double eval_Q(double phi, double v);
/// Coefficients of Q(phi, v) in powers of v.
std::array<double, 4> Q_cubic(double phi);
double xi(const State& x);
double dxi(const State& x);
/// Largest |xi'' - ((6 v^2 + 4 cos 2phi + 6) xi - 2 xi' + Q)| over a d = 5 trajectory.
double xi_system_residual(const Trajectory& traj);

/// x >= 0 and y >= 3x.
bool in_cone_K(double x, double y);
/// (phi, phi'') and (phi', phi''') both in K.
bool state_in_cone(const State& x);

struct SosCheck {
  double lhs;
  double rhs;
};
/// y^2 - 4yv + 7v^2 + 3v^4 against 3v^4 + 7(v - 2y/7)^2 + 3y^2/7.
SosCheck sos_identity_check(double y, double v);

/// Upper/lower growth constant for p, fitted by sampling: the smallest
/// power of two passing growth_bound_check for d = 5, 6, 7 with 1e6 samples.
inline constexpr double kGrowthC1 = 32.0;

struct BlowupStructure {
  double alpha;
  double beta;
  double c0;
  Dimension d;

  explicit BlowupStructure(Dimension d);
  /// The nonlinearity of u'''' = p(u, u', u'') - alpha u'''.
  double p(double xi0, double xi1, double xi2) const;
  double lower(double xi1, double xi2, double C1) const;
  double upper(double xi1, double xi2, double C1) const;
};

struct GrowthReport {
  long samples = 0;
  long lower_violations = 0;
  long upper_violations = 0;
  double worst_lower_margin = 0.0;  // min of p - lower
  double worst_upper_margin = 0.0;  // min of upper - p
  double C1 = 0.0;
};

GrowthReport growth_bound_check(Dimension d, long samples, double C1 = kGrowthC1, std::uint64_t seed = 1);

/// Smallest power of two C1 >= 1 with zero sampled violations.
double fit_growth_constant(Dimension d, long samples, std::uint64_t seed = 1);

}  // namespace biharm
