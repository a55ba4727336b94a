#pragma once

// The unstable manifold of the origin (d = 5) through its linear chart, the
// seeding circle, classification of the seeded orbits by the sign of phi''
// when |phi''| first reaches 2 sqrt(6), and bisection for the heteroclinic
// orbit running from 0 to (pi/2, 0, 0, 0).

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "biharm/defaults.hpp"
#include "biharm/integrator.hpp"
#include "biharm/ode_core.hpp"

namespace biharm {

struct LocalChart {
  static constexpr Vec4 eta3{1.0, 1.0, 1.0, 1.0};
  static constexpr Vec4 eta4{1.0, 3.0, 9.0, 27.0};
  // Derivative of the graph map at 0, acting on z = (phi, phi'').
  static constexpr std::array<std::array<double, 2>, 2> DW0{{{0.75, 0.25}, {-2.25, 3.25}}};
};

inline constexpr double kDefaultEps0 = defaults::kEps0;
inline constexpr double kHeteroclinicTol = defaults::kHeteroclinicTol;

struct SeedSpec {
  double eps0 = kDefaultEps0;
  double theta = 0.0;

  /// Throws std::invalid_argument unless 0 < eps0 <= 0.1 and theta is finite.
  void validate() const;
};

/// (z1, (DW0 z)_1, z2, (DW0 z)_2) with z = eps0 (cos theta, sin theta).
State seed_state(const SeedSpec& spec);

/// Root in [0, pi/2] of 2 sqrt(6) sin(eps0 cos theta) = eps0 sin theta.
double theta0(double eps0);

enum class Outcome { BlowupPlus, BlowupMinus, HeteroclinicCandidate, Undecided };
std::string to_string(Outcome o);

struct ClassificationResult {
  double theta = 0.0;
  Outcome outcome = Outcome::Undecided;
  std::optional<double> tau;
  std::optional<int> g;
  State end_state;
  double end_s = 0.0;
  std::string diagnostics;
};

/// Distance of x from (pi/2, 0, 0, 0) in the Euclidean norm.
double distance_to_target(const State& x);

/// True when (phi, phi'') lies in C (boundary included) at every sample.
bool track_in_region_C(const Trajectory& traj);

struct ClassifiedOrbit {
  ClassificationResult result;
  Trajectory trajectory;
};

ClassifiedOrbit classify_orbit_traj(const SeedSpec& spec, const IntegrationConfig& cfg);
ClassificationResult classify_orbit(const SeedSpec& spec, const IntegrationConfig& cfg);

/// n >= 2 equally spaced angles on [a, b], classified in parallel; the
/// result is ordered by theta and independent of the thread count.
std::vector<ClassificationResult> classify_grid(double a, double b, int n, double eps0, const IntegrationConfig& cfg,
                                                int threads = 0);

/// Number of sign changes of g along a grid, skipping entries without g.
int count_sign_changes(const std::vector<ClassificationResult>& grid);

void write_grid_csv(const std::vector<ClassificationResult>& grid, std::ostream& os);

struct ShootOptions {
  double eps0 = kDefaultEps0;
  // Continue the bisection in 50-digit arithmetic until the two bracket
  // orbits agree at the end of the span. Double precision alone loses the
  // orbit well before s = 25.
  bool high_precision = true;
  double agree_tol = 1e-8;
  int max_hp_iterations = 220;
};

struct HeteroclinicResult {
  double theta_star = 0.0;
  double theta_lo = 0.0;
  double theta_hi = 0.0;
  int iterations = 0;
  // Decimal digits of the refined angle and the width of its bracket.
  std::string theta_star_digits;
  double refined_width = 0.0;
  int refined_iterations = 0;
  bool refined = false;
  ClassificationResult result;
  Trajectory trajectory;
  double end_distance = 0.0;
  bool track_in_C = false;
};

/// Requires g(lo) = -1 and g(hi) = +1 (std::invalid_argument otherwise).
HeteroclinicResult find_heteroclinic(double theta_lo, double theta_hi, double theta_tol, const IntegrationConfig& cfg,
                                     const ShootOptions& opt = {});

/// Default bracket (-pi/2, theta0(eps0) + 0.05).
std::array<double, 2> default_bracket(double eps0);

/// Coefficients of x in the eigenbasis (eta1, eta2, eta3, eta4) of the even
/// linearization at 0, eigenvalues (1 - d, 3 - d, 1, 3) for d = 5.
Vec4 eigen_coordinates(const State& x);

struct DecayReport {
  double rate1 = 0.0;
  double rate2 = 0.0;
  int window1 = 0;  // samples used in each fit
  int window2 = 0;
  double min_norm = 0.0;   // smallest state norm reached in reversed time
  double sigma_at_min = 0.0;
  bool stayed_in_C_or_minus_C = true;
};

/// Integrates the seed in reversed time and fits the decay of the eta3 and
/// eta4 coordinates by least squares.
DecayReport verify_unstable_decay(const SeedSpec& spec, const IntegrationConfig& cfg);

}  // namespace biharm
