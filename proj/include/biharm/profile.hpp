#pragma once

// Radial pullback psi(r) = phi(log r - shift), the Laplacian of the
// equivariant map u = (x/|x| sin psi, cos psi), rescaled blowup variables and
// the winding profile (d = 5).

#include <iosfwd>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "biharm/defaults.hpp"
#include "biharm/integrator.hpp"

namespace biharm {

struct RadialSample {
  double r = 0.0;
  double psi = 0.0;
  double dpsi = 0.0;
  double d2psi = 0.0;
};

struct RadialProfile {
  std::vector<RadialSample> samples;  // r strictly increasing
  double psi0 = 0.0;
  std::string meta;
  double shift = 0.0;
  // Source orbit for exact evaluation between samples.
  std::shared_ptr<const Trajectory> source;
};

/// (psi, psi', psi'') at r = e^(s - shift) from the jet of phi at s.
RadialSample radial_sample(double s, const State& x, double shift);

/// Samples at the trajectory nodes with s <= shift (default: the terminal s),
/// or, with ds > 0, on a uniform grid in s (geometric in r). Reversed
/// trajectories are mapped back to s = -sigma. Throws std::invalid_argument
/// when no sample lies at or below the shift.
RadialProfile to_radial(std::shared_ptr<const Trajectory> traj, std::optional<double> shift = std::nullopt,
                        double ds = 0.0);

/// Jet at r: exact from the source orbit when available, else linear in log r
/// between samples. Throws std::out_of_range outside the sampled range.
RadialSample radial_at(const RadialProfile& prof, double r);

struct LaplacianParts {
  double L0f0 = 0.0;
  double L1f1 = 0.0;
};

/// L0 sin(psi) and L1 cos(psi) from a jet, with
/// L0 f = f'' + (d-1)/r f' - (d-1)/r^2 f and L1 f = f'' + (d-1)/r f'.
LaplacianParts laplacian_parts(Dimension d, const RadialSample& j);
/// d in {5, 6, 7}; r inside the sampled range.
LaplacianParts laplacian_components(Dimension d, const RadialProfile& prof, double r);

struct BlowupDiagnostics {
  std::vector<double> s, lambda, v1, v2, zeta;
  double s_f_estimate = 0.0;
  double fit_r2 = 0.0;
  double fit_from = 0.0;  // start of the window used for the 1/lambda fit
  int fit_samples = 0;
};

/// Rescaled variables on the terminal run of samples with phi''' > 0:
/// lambda = cbrt(phi'''), v1 = phi'/lambda, v2 = phi''/lambda^2,
/// zeta = lambda'/lambda^2 (lambda' by centered differences of the dense
/// output). s_f from a least-squares line through 1/lambda over the last
/// decade of lambda growth. Throws std::invalid_argument without such a run.
BlowupDiagnostics blowup_diagnostics(const Trajectory& traj);

struct WindingSeed {
  double eps0 = defaults::kEps0;
  // Offset from theta0(eps0); the default seed lies outside C and -C.
  double theta_offset = defaults::kWindingOffset;
  std::optional<double> theta;  // overrides the offset
};

struct WindingReport {
  double s_f_estimate = 0.0;
  std::vector<double> crossings;  // s where phi crosses k pi, k = 1, 2, ...
  int winding_count = 0;
  double theta = 0.0;
  double eps0 = 0.0;
  bool reflected = false;
  double blowup_norm = 0.0;
};

class NoBlowupError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct WindingResult {
  std::shared_ptr<const Trajectory> trajectory;
  RadialProfile profile;
  WindingReport report;
  BlowupDiagnostics diagnostics;
};

/// Integrates a seed on the unstable manifold to blowup, reflecting phi if it
/// runs to -infinity, and shifts so that blowup sits at r = 1. Throws
/// NoBlowupError when the orbit does not blow up within cfg.max_span.
WindingResult build_winding_profile(const IntegrationConfig& cfg, const WindingSeed& seed = {});

/// Columns r, psi, dpsi, d2psi, L0f0, L1f1.
void write_profile_csv(const RadialProfile& prof, Dimension d, std::ostream& os);

}  // namespace biharm
