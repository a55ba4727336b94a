#include "biharm/profile.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

#include "biharm/manifold.hpp"

namespace biharm {

namespace {

// Jet of phi at s for forward and reversed trajectories alike.
State phi_jet_at(const Trajectory& traj, double s) {
  if (!traj.reversed) return sample_at(traj, s);
  return time_reverse(sample_at(traj, -s));
}

std::pair<double, double> phi_range(const Trajectory& traj) {
  if (!traj.reversed) return {traj.s_begin(), traj.s_end()};
  return {-traj.s_end(), -traj.s_begin()};
}

}  // namespace

RadialSample radial_sample(double s, const State& x, double shift) {
  const double r = std::exp(s - shift);
  return {r, x.phi, x.dphi / r, (x.d2phi - x.dphi) / (r * r)};
}

RadialProfile to_radial(std::shared_ptr<const Trajectory> traj, std::optional<double> shift, double ds) {
  if (!traj || traj->samples.empty()) throw std::invalid_argument("empty trajectory");
  const auto [a, b] = phi_range(*traj);
  RadialProfile prof;
  prof.shift = shift.value_or(b);
  prof.source = traj;
  prof.meta = traj->reversed ? "reversed" : "forward";
  const double top = std::min(b, prof.shift);
  if (top < a) throw std::invalid_argument("trajectory does not reach below the shift");
  if (ds > 0.0) {
    const long n = static_cast<long>(std::floor((top - a) / ds));
    for (long i = 0; i <= n; ++i) {
      const double s = a + i * ds;
      prof.samples.push_back(radial_sample(s, phi_jet_at(*traj, s), prof.shift));
    }
  } else {
    std::vector<Sample> pts = traj->samples;
    if (traj->reversed) {
      for (auto& p : pts) {
        p.s = -p.s;
        p.state = time_reverse(p.state);
      }
      std::reverse(pts.begin(), pts.end());
    }
    for (const auto& p : pts) {
      if (p.s > prof.shift) break;
      if (!prof.samples.empty() && std::exp(p.s - prof.shift) <= prof.samples.back().r) continue;
      prof.samples.push_back(radial_sample(p.s, p.state, prof.shift));
    }
  }
  return prof;
}

RadialSample radial_at(const RadialProfile& prof, double r) {
  if (prof.samples.empty() || !(r >= prof.samples.front().r && r <= prof.samples.back().r)) {
    throw std::out_of_range("r outside the sampled range");
  }
  if (prof.source) {
    const double s = std::log(r) + prof.shift;
    const auto [a, b] = phi_range(*prof.source);
    const double sc = std::clamp(s, a, b);
    RadialSample j = radial_sample(sc, phi_jet_at(*prof.source, sc), prof.shift);
    j.r = r;
    return j;
  }
  const auto it = std::lower_bound(prof.samples.begin(), prof.samples.end(), r,
                                   [](const RadialSample& p, double v) { return p.r < v; });
  if (it->r == r) return *it;
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  const double t = std::log(r / lo.r) / std::log(hi.r / lo.r);
  auto mix = [t](double x, double y) { return x + t * (y - x); };
  return {r, mix(lo.psi, hi.psi), mix(lo.dpsi, hi.dpsi), mix(lo.d2psi, hi.d2psi)};
}

LaplacianParts laplacian_parts(Dimension d, const RadialSample& j) {
  const double k = d.real() - 1.0;
  const double s = std::sin(j.psi), c = std::cos(j.psi);
  const double p1 = j.dpsi, p2 = j.d2psi, r = j.r;
  const double f0p = c * p1, f0pp = -s * p1 * p1 + c * p2;
  const double f1p = -s * p1, f1pp = -c * p1 * p1 - s * p2;
  return {f0pp + k / r * f0p - k / (r * r) * s, f1pp + k / r * f1p};
}

LaplacianParts laplacian_components(Dimension d, const RadialProfile& prof, double r) {
  if (d.value() < 5 || d.value() > 7) throw std::invalid_argument("laplacian components need d in {5, 6, 7}");
  return laplacian_parts(d, radial_at(prof, r));
}

BlowupDiagnostics blowup_diagnostics(const Trajectory& traj) {
  if (traj.reversed) throw std::invalid_argument("blowup diagnostics need a forward trajectory");
  const auto& smp = traj.samples;
  size_t start = smp.size();
  while (start > 0 && smp[start - 1].state.d3phi > 0.0) --start;
  if (smp.size() - start < 3) throw std::invalid_argument("no terminal run with phi''' > 0");

  BlowupDiagnostics out;
  auto lam_at = [&](double s) { return std::cbrt(sample_at(traj, s).d3phi); };
  const double s_lo = smp[start].s, s_hi = smp.back().s;
  for (size_t i = start; i < smp.size(); ++i) {
    const State& x = smp[i].state;
    const double s = smp[i].s;
    const double lam = std::cbrt(x.d3phi);
    const double h_loc = i + 1 < smp.size() ? smp[i + 1].s - s : s - smp[i - 1].s;
    const double dl = 1e-3 * h_loc;
    double dlam;
    if (s - dl >= s_lo && s + dl <= s_hi) {
      dlam = (lam_at(s + dl) - lam_at(s - dl)) / (2 * dl);
    } else if (s + dl <= s_hi) {
      dlam = (lam_at(s + dl) - lam) / dl;
    } else {
      dlam = (lam - lam_at(s - dl)) / dl;
    }
    out.s.push_back(s);
    out.lambda.push_back(lam);
    out.v1.push_back(x.dphi / lam);
    out.v2.push_back(x.d2phi / (lam * lam));
    out.zeta.push_back(dlam / (lam * lam));
  }

  // Final decade of lambda growth.
  const double lam_end = out.lambda.back();
  size_t from = out.lambda.size();
  while (from > 0 && out.lambda[from - 1] >= lam_end / 10.0) --from;
  if (out.lambda.size() - from < 3) from = out.lambda.size() >= 3 ? out.lambda.size() - 3 : 0;
  double n = 0, ms = 0, my = 0;
  for (size_t i = from; i < out.s.size(); ++i) {
    ms += out.s[i];
    my += 1.0 / out.lambda[i];
    n += 1;
  }
  ms /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (size_t i = from; i < out.s.size(); ++i) {
    const double ds = out.s[i] - ms, dy = 1.0 / out.lambda[i] - my;
    sxx += ds * ds;
    sxy += ds * dy;
    syy += dy * dy;
  }
  const double slope = sxy / sxx;
  const double icpt = my - slope * ms;
  out.s_f_estimate = -icpt / slope;
  out.fit_r2 = syy > 0 ? sxy * sxy / (sxx * syy) : 1.0;
  out.fit_from = out.s[from];
  out.fit_samples = static_cast<int>(out.s.size() - from);
  return out;
}

namespace {

Trajectory reflected(const Trajectory& t) {
  Trajectory r = t;
  for (auto& p : r.samples) p.state = -1.0 * p.state;
  for (auto& seg : r.segments)
    for (auto& c : seg.coeffs)
      for (auto& v : c) v = -v;
  for (auto& e : r.events) e.state = -1.0 * e.state;
  if (r.termination.event) r.termination.event->state = -1.0 * r.termination.event->state;
  return r;
}

}  // namespace

WindingResult build_winding_profile(const IntegrationConfig& cfg, const WindingSeed& seed) {
  cfg.validate();
  const double th = seed.theta.value_or(theta0(seed.eps0) + seed.theta_offset);
  const SeedSpec spec{seed.eps0, th};
  Trajectory traj = integrate(Dimension(5), seed_state(spec), 0.0, cfg);
  if (traj.termination.kind != TerminationKind::BlowupDetected) {
    throw NoBlowupError("orbit did not blow up within span " + std::to_string(cfg.max_span));
  }
  WindingResult out;
  out.report.theta = th;
  out.report.eps0 = seed.eps0;
  out.report.blowup_norm = cfg.blowup_norm;
  if (traj.final_state().phi < 0.0) {
    traj = reflected(traj);
    out.report.reflected = true;
  }
  auto shared = std::make_shared<const Trajectory>(std::move(traj));
  out.trajectory = shared;
  out.diagnostics = blowup_diagnostics(*shared);
  out.report.s_f_estimate = out.diagnostics.s_f_estimate;

  const auto& smp = shared->samples;
  int k = 1;
  for (size_t i = 0; i + 1 < smp.size(); ++i) {
    while (smp[i].state.phi < k * kPi && smp[i + 1].state.phi >= k * kPi) {
      double a = smp[i].s, b = smp[i + 1].s;
      for (int it = 0; it < 200 && b - a > 1e-14 * std::max(1.0, std::abs(b)); ++it) {
        const double m = 0.5 * (a + b);
        (sample_at(*shared, m).phi < k * kPi ? a : b) = m;
      }
      out.report.crossings.push_back(b);
      ++k;
    }
  }
  out.report.winding_count = static_cast<int>(out.report.crossings.size());
  const double shift = std::max(out.report.s_f_estimate, shared->s_end());
  out.profile = to_radial(shared, shift);
  out.profile.meta = "winding";
  return out;
}

void write_profile_csv(const RadialProfile& prof, Dimension d, std::ostream& os) {
  os << "r,psi,dpsi,d2psi,L0f0,L1f1\n" << std::setprecision(17);
  for (const auto& p : prof.samples) {
    const auto L = laplacian_parts(d, p);
    os << p.r << ',' << p.psi << ',' << p.dpsi << ',' << p.d2psi << ',' << L.L0f0 << ',' << L.L1f1 << '\n';
  }
}

}  // namespace biharm
