#include "biharm/integrator.hpp"

#include <algorithm>
#include <limits>
#include <ostream>
#include <random>
#include <stdexcept>

#include "biharm/regions.hpp"

namespace biharm {

void IntegrationConfig::validate() const {
  auto pos = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument(std::string("IntegrationConfig: ") + name + " must be positive");
  };
  pos(rel_tol, "rel_tol");
  pos(abs_tol, "abs_tol");
  pos(max_step, "max_step");
  pos(blowup_norm, "blowup_norm");
  pos(max_span, "max_span");
  pos(event_refine_tol, "event_refine_tol");
  if (max_steps <= 0) throw std::invalid_argument("IntegrationConfig: max_steps must be positive");
}

std::string to_string(EventKind k) {
  switch (k) {
    case EventKind::SecondDerivUp: return "SecondDerivUp";
    case EventKind::SecondDerivDown: return "SecondDerivDown";
    case EventKind::RegionCExit: return "RegionCExit";
    case EventKind::Custom: return "Custom";
  }
  return "?";
}

std::string to_string(TerminationKind k) {
  switch (k) {
    case TerminationKind::SpanExhausted: return "SpanExhausted";
    case TerminationKind::BlowupDetected: return "BlowupDetected";
    case TerminationKind::EventStop: return "EventStop";
  }
  return "?";
}

EventWatch EventWatch::second_deriv_up(std::optional<double> level) {
  return {EventKind::SecondDerivUp, level, "second_deriv_up", {}};
}
EventWatch EventWatch::second_deriv_down(std::optional<double> level) {
  return {EventKind::SecondDerivDown, level, "second_deriv_down", {}};
}
EventWatch EventWatch::region_c_exit() { return {EventKind::RegionCExit, std::nullopt, "region_c_exit", {}}; }
EventWatch EventWatch::custom(std::string id, std::function<double(const State&)> g) {
  if (!g) throw std::invalid_argument("custom event needs an indicator");
  return {EventKind::Custom, std::nullopt, std::move(id), std::move(g)};
}

Vec4 DenseSegment::operator()(double s) const {
  if (form == Form::Dopri5) {
    const double th = (s - s0) / h;
    const double th1 = 1.0 - th;
    Vec4 y;
    for (int i = 0; i < 4; ++i) {
      y[i] = coeffs[0][i] + th * (coeffs[1][i] + th1 * (coeffs[2][i] + th * (coeffs[3][i] + th1 * coeffs[4][i])));
    }
    return y;
  }
  const double t = s - s0;
  Vec4 y{0.0, 0.0, 0.0, 0.0};
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    for (int i = 0; i < 4; ++i) y[i] = y[i] * t + (*it)[i];
  }
  return y;
}

State time_reverse(const State& x) { return {x.phi, -x.dphi, x.d2phi, -x.d3phi}; }

namespace {

// Indicator whose sign change from - to + marks the event.
std::function<double(const State&)> make_indicator(Dimension d, const EventWatch& w, bool reversed) {
  switch (w.kind) {
    case EventKind::SecondDerivUp: {
      const double c = w.level ? *w.level : c_star(d);
      return [c](const State& x) { return x.d2phi - c; };
    }
    case EventKind::SecondDerivDown: {
      const double c = w.level ? *w.level : c_star(d);
      return [c](const State& x) { return -x.d2phi - c; };
    }
    case EventKind::RegionCExit:
      // phi'' is unchanged by time reversal, so the (phi, phi'') test is too.
      (void)reversed;
      return [](const State& x) { return -region_c_margin(x.phi, x.d2phi); };
    case EventKind::Custom:
      return w.indicator;
  }
  throw std::logic_error("unknown event kind");
}

Trajectory run(Dimension d, const State& x0, double s0, const IntegrationConfig& cfg,
               const std::vector<EventWatch>& watch, bool reversed) {
  cfg.validate();
  if (!x0.finite()) throw std::invalid_argument("initial state must be finite");

  Trajectory traj;
  traj.d = d;
  traj.reversed = reversed;
  traj.samples.push_back({s0, x0});

  if (x0.norm() > cfg.blowup_norm) {
    traj.termination = {TerminationKind::BlowupDetected, s0, x0.norm(), std::nullopt};
    return traj;
  }

  std::vector<std::function<double(const State&)>> g;
  std::vector<bool> armed;
  for (const auto& w : watch) {
    g.push_back(make_indicator(d, w, reversed));
    armed.push_back(g.back()(x0) < 0.0);
  }

  auto field = [d, reversed](const VecN<4>& y) {
    const State x = State::from(y);
    return reversed ? reversed_field(d, x) : vector_field(d, x);
  };
  Dopri5<4, decltype(field)> stepper(field, {cfg.rel_tol, cfg.abs_tol, cfg.max_step});

  const double s_end = s0 + cfg.max_span;
  double s = s0;
  Vec4 y = x0.vec();
  long steps = 0;
  for (;;) {
    if (++steps > cfg.max_steps) throw IntegrationError("step budget exhausted", s);
    const auto acc = stepper.step(s, y, s_end);
    DenseSegment seg{DenseSegment::Form::Dopri5, acc.dense.s0, acc.dense.h,
                     {acc.dense.rcont.begin(), acc.dense.rcont.end()}};
    const State x_new = State::from(acc.y_new);

    // Earliest event inside this step.
    int hit = -1;
    double s_hit = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double gv = g[i](x_new);
      if (armed[i] && gv >= 0.0) {
        double lo = s, hi = acc.s_new;
        while (hi - lo > cfg.event_refine_tol) {
          const double mid = 0.5 * (lo + hi);
          if (mid <= lo || mid >= hi) break;
          (g[i](State::from(seg(mid))) < 0.0 ? lo : hi) = mid;
        }
        if (hi < s_hit) {
          s_hit = hi;
          hit = static_cast<int>(i);
        }
      }
    }
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (!armed[i] && g[i](x_new) < 0.0) armed[i] = true;
    }

    traj.segments.push_back(std::move(seg));
    if (hit >= 0) {
      const State xe = s_hit == acc.s_new ? x_new : State::from(traj.segments.back()(s_hit));
      EventRecord rec{watch[hit].kind, watch[hit].id, s_hit, xe};
      traj.samples.push_back({s_hit, xe});
      traj.events.push_back(rec);
      traj.termination = {TerminationKind::EventStop, s_hit, xe.norm(), rec};
      return traj;
    }
    traj.samples.push_back({acc.s_new, x_new});
    s = acc.s_new;
    y = acc.y_new;
    const double nrm = x_new.norm();
    if (nrm > cfg.blowup_norm) {
      traj.termination = {TerminationKind::BlowupDetected, s, nrm, std::nullopt};
      return traj;
    }
    if (s >= s_end) {
      traj.termination = {TerminationKind::SpanExhausted, s, nrm, std::nullopt};
      return traj;
    }
  }
}

}  // namespace

Trajectory integrate(Dimension d, const State& x0, double s0, const IntegrationConfig& cfg,
                     const std::vector<EventWatch>& watch) {
  return run(d, x0, s0, cfg, watch, false);
}

Trajectory integrate_reversed(Dimension d, const State& x0, const IntegrationConfig& cfg,
                              const std::vector<EventWatch>& watch) {
  return run(d, time_reverse(x0), 0.0, cfg, watch, true);
}

State sample_at(const Trajectory& traj, double s) {
  const auto& sm = traj.samples;
  if (sm.empty() || !(s >= sm.front().s && s <= sm.back().s)) {
    throw std::out_of_range("sample_at: s outside trajectory span");
  }
  auto it = std::lower_bound(sm.begin(), sm.end(), s, [](const Sample& a, double v) { return a.s < v; });
  if (it != sm.end() && it->s == s) return it->state;
  const auto idx = static_cast<std::size_t>(it - sm.begin()) - 1;
  return State::from(traj.segments.at(idx)(s));
}

void write_csv(const Trajectory& traj, std::ostream& os) {
  os << "s,phi,dphi,d2phi,d3phi,energy_total,energy_rate\n";
  os.precision(17);
  for (const auto& [s, x] : traj.samples) {
    const auto e = energy(traj.d, traj.reversed ? time_reverse(x) : x);
    os << s << ',' << x.phi << ',' << x.dphi << ',' << x.d2phi << ',' << x.d3phi << ',' << e.total << ',' << e.rate
       << '\n';
  }
}

std::vector<HarmonicSample> integrate_harmonic(Dimension d, const HarmonicState& h0, double span,
                                               const IntegrationConfig& cfg) {
  cfg.validate();
  auto field = [d](const VecN<2>& y) { return harmonic_field(d, {y[0], y[1]}); };
  Dopri5<2, decltype(field)> stepper(field, {cfg.rel_tol, cfg.abs_tol, cfg.max_step});
  std::vector<HarmonicSample> out{{0.0, h0}};
  double s = 0.0;
  VecN<2> y{h0.phi, h0.dphi};
  long steps = 0;
  while (s < span) {
    if (++steps > cfg.max_steps) throw IntegrationError("step budget exhausted", s);
    const auto acc = stepper.step(s, y, span);
    s = acc.s_new;
    y = acc.y_new;
    out.push_back({s, {y[0], y[1]}});
  }
  return out;
}

EnergyAudit energy_audit(Dimension d, EnergyMode mode, int orbits, double span, const IntegrationConfig& cfg,
                         std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(-kPi, kPi), unit(-1.0, 1.0);
  IntegrationConfig c = cfg;
  c.max_span = span;
  EnergyAudit out;
  out.mode = mode;
  out.orbits = orbits;
  for (int k = 0; k < orbits; ++k) {
    const double a = angle(rng), b = unit(rng), e = unit(rng), f = unit(rng);
    const State x0{a, b, e, f};
    const Trajectory t = integrate(d, x0, 0.0, c);
    const double e0 = energy(d, x0).total;
    double defect = 0.0, prev = e0;
    for (const auto& smp : t.samples) {
      const double en = energy(d, smp.state).total;
      if (mode == EnergyMode::Conservation) {
        defect = std::max(defect, std::abs(en - e0));
      } else {
        defect = std::min(defect, en - prev);
      }
      prev = en;
    }
    const bool worse = mode == EnergyMode::Conservation ? defect > out.worst_defect : defect < out.worst_defect;
    if (worse || k == 0) {
      out.worst_defect = defect;
      out.worst_orbit = k;
    }
  }
  return out;
}

}  // namespace biharm
