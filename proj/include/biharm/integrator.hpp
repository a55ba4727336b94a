#pragma once

// Adaptive integration of the fourth-order system, forward and in reversed
// time, with dense output, event location and blowup termination.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "biharm/defaults.hpp"
#include "biharm/dopri5.hpp"
#include "biharm/ode_core.hpp"

namespace biharm {

struct IntegrationConfig {
  double rel_tol = defaults::kRelTol;
  double abs_tol = defaults::kAbsTol;
  double max_step = defaults::kMaxStep;
  double blowup_norm = defaults::kBlowupNorm;
  double max_span = defaults::kMaxSpan;
  double event_refine_tol = defaults::kEventRefineTol;
  long max_steps = defaults::kMaxSteps;

  /// Throws std::invalid_argument unless every field is positive.
  void validate() const;
};

enum class EventKind { SecondDerivUp, SecondDerivDown, RegionCExit, Custom };

std::string to_string(EventKind k);

/// A watched event fires the first time its indicator goes from negative to
/// non-negative. Indicators already non-negative at the start must dip below
/// zero before they can fire.
struct EventWatch {
  EventKind kind = EventKind::Custom;
  // Threshold for the second-derivative events; unset means c_star(d).
  std::optional<double> level;
  std::string id;
  std::function<double(const State&)> indicator;  // Custom only

  static EventWatch second_deriv_up(std::optional<double> level = std::nullopt);
  static EventWatch second_deriv_down(std::optional<double> level = std::nullopt);
  static EventWatch region_c_exit();
  static EventWatch custom(std::string id, std::function<double(const State&)> g);
};

struct EventRecord {
  EventKind kind = EventKind::Custom;
  std::string id;
  double s = 0.0;
  State state;
};

enum class TerminationKind { SpanExhausted, BlowupDetected, EventStop };

std::string to_string(TerminationKind k);

struct Termination {
  TerminationKind kind = TerminationKind::SpanExhausted;
  double s_last = 0.0;
  double norm = 0.0;
  std::optional<EventRecord> event;
};

struct Sample {
  double s = 0.0;
  State state;
};

/// Interpolant between two consecutive samples. Either the Dormand-Prince
/// continuous extension (coefficients rcont) or a polynomial in (s - s0).
struct DenseSegment {
  enum class Form { Dopri5, Power };
  Form form = Form::Dopri5;
  double s0 = 0.0;
  double h = 0.0;
  std::vector<Vec4> coeffs;

  Vec4 operator()(double s) const;
};

struct Trajectory {
  Dimension d{5};
  // Samples of the reversed-time jet u(sigma) = phi(-sigma) when true.
  bool reversed = false;
  std::vector<Sample> samples;
  std::vector<DenseSegment> segments;  // segments[i] spans samples[i]..samples[i+1]
  std::vector<EventRecord> events;
  Termination termination;

  double s_begin() const { return samples.front().s; }
  double s_end() const { return samples.back().s; }
  const State& final_state() const { return samples.back().state; }
};

Trajectory integrate(Dimension d, const State& x0, double s0, const IntegrationConfig& cfg,
                     const std::vector<EventWatch>& watch = {});

/// Integrates the reversed equation for u(sigma) = phi(-sigma) forward in
/// sigma from sigma = 0, starting at the phi-jet x0.
Trajectory integrate_reversed(Dimension d, const State& x0, const IntegrationConfig& cfg,
                              const std::vector<EventWatch>& watch = {});

/// Jet of u(sigma) = phi(-sigma) from the jet of phi, and back (involution).
State time_reverse(const State& x);

/// Dense-output state at s. Throws std::out_of_range outside the span.
State sample_at(const Trajectory& traj, double s);

/// Columns s, phi, dphi, d2phi, d3phi, energy_total, energy_rate. For a
/// reversed trajectory the energy columns are those of phi at s = -sigma.
void write_csv(const Trajectory& traj, std::ostream& os);

struct HarmonicSample {
  double s = 0.0;
  HarmonicState state;
};

std::vector<HarmonicSample> integrate_harmonic(Dimension d, const HarmonicState& h0, double span,
                                               const IntegrationConfig& cfg);

enum class EnergyMode { Conservation, Monotonicity };

struct EnergyAudit {
  EnergyMode mode = EnergyMode::Conservation;
  int orbits = 0;
  // Conservation: max |E(s) - E(s0)|. Monotonicity: most negative increment
  // of E between consecutive samples (0 when E never decreases).
  double worst_defect = 0.0;
  int worst_orbit = -1;
};

/// Random starts with phi in [-pi, pi] and derivatives in [-1, 1], each
/// integrated over span (or until the norm cap of cfg).
EnergyAudit energy_audit(Dimension d, EnergyMode mode, int orbits, double span, const IntegrationConfig& cfg,
                         std::uint64_t seed = 1);

}  // namespace biharm
