#include "biharm/manifold.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <boost/math/tools/roots.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "biharm/interval_cert.hpp"
#include "biharm/regions.hpp"
#include "biharm/taylor_hp.hpp"

namespace biharm {

void SeedSpec::validate() const {
  if (!(eps0 > 0.0 && eps0 <= 0.1)) throw std::invalid_argument("eps0 must lie in (0, 0.1]");
  if (!std::isfinite(theta)) throw std::invalid_argument("theta must be finite");
}

State seed_state(const SeedSpec& spec) {
  spec.validate();
  const double z1 = spec.eps0 * std::cos(spec.theta);
  const double z2 = spec.eps0 * std::sin(spec.theta);
  const auto& D = LocalChart::DW0;
  return {z1, D[0][0] * z1 + D[0][1] * z2, z2, D[1][0] * z1 + D[1][1] * z2};
}

double theta0(double eps0) {
  SeedSpec{eps0, 0.0}.validate();
  auto h = [eps0](double th) { return eps0 * std::sin(th) - kTwoSqrt6 * std::sin(eps0 * std::cos(th)); };
  std::uintmax_t iters = 200;
  const auto [a, b] =
      boost::math::tools::toms748_solve(h, 0.0, kPi / 2, boost::math::tools::eps_tolerance<double>(52), iters);
  return 0.5 * (a + b);
}

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::BlowupPlus: return "BlowupPlus";
    case Outcome::BlowupMinus: return "BlowupMinus";
    case Outcome::HeteroclinicCandidate: return "HeteroclinicCandidate";
    case Outcome::Undecided: return "Undecided";
  }
  return "?";
}

double distance_to_target(const State& x) {
  return std::hypot(std::hypot(x.phi - kPi / 2, x.dphi), std::hypot(x.d2phi, x.d3phi));
}

bool track_in_region_C(const Trajectory& traj) {
  for (const auto& smp : traj.samples) {
    if (in_region_C(smp.state.phi, smp.state.d2phi, 0.0) == RegionClass::Outside) return false;
  }
  return true;
}

ClassifiedOrbit classify_orbit_traj(const SeedSpec& spec, const IntegrationConfig& cfg) {
  ClassifiedOrbit out;
  auto& r = out.result;
  r.theta = spec.theta;
  const State x0 = seed_state(spec);
  const Dimension d5(5);
  try {
    out.trajectory = integrate(d5, x0, 0.0, cfg,
                               {EventWatch::second_deriv_up(kTwoSqrt6), EventWatch::second_deriv_down(kTwoSqrt6)});
  } catch (const IntegrationError& e) {
    r.outcome = Outcome::Undecided;
    r.end_s = e.s();
    r.diagnostics = std::string("integration failed: ") + e.what();
    return out;
  }
  const auto& traj = out.trajectory;
  r.end_state = traj.final_state();
  r.end_s = traj.s_end();
  const auto& term = traj.termination;
  if (term.kind == TerminationKind::EventStop && term.event) {
    const bool up = term.event->kind == EventKind::SecondDerivUp;
    r.outcome = up ? Outcome::BlowupPlus : Outcome::BlowupMinus;
    r.g = up ? 1 : -1;
    r.tau = term.event->s;
    r.end_state = term.event->state;
    r.end_s = term.event->s;
  } else if (term.kind == TerminationKind::SpanExhausted) {
    const double dist = distance_to_target(r.end_state);
    if (dist <= kHeteroclinicTol && track_in_region_C(traj)) {
      r.outcome = Outcome::HeteroclinicCandidate;
    } else {
      std::ostringstream os;
      os << "span exhausted at distance " << dist << " from (pi/2,0,0,0)";
      r.diagnostics = os.str();
    }
  } else {
    r.diagnostics = "norm cap reached with |phi''| below 2 sqrt(6)";
  }
  return out;
}

ClassificationResult classify_orbit(const SeedSpec& spec, const IntegrationConfig& cfg) {
  return classify_orbit_traj(spec, cfg).result;
}

std::vector<ClassificationResult> classify_grid(double a, double b, int n, double eps0, const IntegrationConfig& cfg,
                                                int threads) {
  if (n < 2) throw std::invalid_argument("grid needs at least 2 points");
  if (!(std::isfinite(a) && std::isfinite(b) && a < b)) throw std::invalid_argument("invalid theta range");
  SeedSpec{eps0, a}.validate();
  cfg.validate();
  std::vector<ClassificationResult> out(n);
  std::atomic<int> next{0};
  auto work = [&] {
    for (int i; (i = next.fetch_add(1)) < n;) {
      const double th = a + (b - a) * i / (n - 1);
      out[i] = classify_orbit({eps0, th}, cfg);
    }
  };
  const int t = std::max(1, std::min(threads > 0 ? threads : default_threads(), n));
  std::vector<std::thread> pool;
  for (int k = 1; k < t; ++k) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  return out;
}

int count_sign_changes(const std::vector<ClassificationResult>& grid) {
  int changes = 0;
  std::optional<int> prev;
  for (const auto& r : grid) {
    if (!r.g) continue;
    if (prev && *prev != *r.g) ++changes;
    prev = r.g;
  }
  return changes;
}

void write_grid_csv(const std::vector<ClassificationResult>& grid, std::ostream& os) {
  os << "theta,outcome,g,tau,end_s,phi,dphi,d2phi,d3phi\n";
  os << std::setprecision(17);
  for (const auto& r : grid) {
    os << r.theta << ',' << to_string(r.outcome) << ',';
    if (r.g) os << *r.g;
    os << ',';
    if (r.tau) os << *r.tau;
    os << ',' << r.end_s << ',' << r.end_state.phi << ',' << r.end_state.dphi << ',' << r.end_state.d2phi << ','
       << r.end_state.d3phi << '\n';
  }
}

std::array<double, 2> default_bracket(double eps0) { return {-kPi / 2, theta0(eps0) + defaults::kBracketOffset}; }

namespace {

using Real = boost::multiprecision::cpp_bin_float_50;
using HpState = std::array<Real, 4>;

constexpr int kHpOrder = 40;
constexpr long kHpMaxSteps = 200000;

struct HpRun {
  int g = 0;  // 0: no crossing before the horizon
  bool reached_span = false;
  HpState at_span{};
};

struct HpRecord {
  std::vector<Sample> samples;
  std::vector<DenseSegment> segments;
};

HpState hp_seed(double eps0, const Real& theta) {
  const Real e(eps0);
  const Real z1 = e * cos(theta), z2 = e * sin(theta);
  return {z1, (3 * z1 + z2) / 4, z2, (-9 * z1 + 13 * z2) / 4};
}

State to_state(const HpState& x) {
  return {x[0].convert_to<double>(), x[1].convert_to<double>(), x[2].convert_to<double>(), x[3].convert_to<double>()};
}

// Integrates the seeded orbit until |phi''| >= 2 sqrt(6) or the horizon,
// landing exactly on s = span on the way. With rec, the orbit up to span is
// recorded as samples and power-form segments.
HpRun hp_run(double eps0, const Real& theta, double span, double horizon, HpRecord* rec = nullptr) {
  static const TaylorFlow<Real> flow(5, kHpOrder, Real("1e-48"));
  static const Real cstar = 2 * sqrt(Real(6));
  HpRun out;
  HpState x = hp_seed(eps0, theta);
  Real s(0);
  const Real S(span), H(horizon);
  if (rec) rec->samples.push_back({0.0, to_state(x)});
  for (long k = 0; k < kHpMaxSteps && s < H; ++k) {
    const auto c = flow.coefficients(x);
    Real h = flow.step_size(c);
    const bool before_span = s < S;
    if (before_span && s + h >= S) h = S - s;
    if (s + h > H) h = H - s;
    x = TaylorFlow<Real>::evaluate(c, h);
    if (rec && before_span) {
      DenseSegment seg;
      seg.form = DenseSegment::Form::Power;
      seg.s0 = s.convert_to<double>();
      seg.h = h.convert_to<double>();
      const int M = static_cast<int>(c.size());
      for (int i = 0; i + 3 < M; ++i) {
        Vec4 v;
        for (int j = 0; j < 4; ++j) {
          Real cij = c[i + j];
          for (int m = 1; m <= j; ++m) cij *= i + m;
          v[j] = cij.convert_to<double>();
        }
        seg.coeffs.push_back(v);
      }
      rec->segments.push_back(std::move(seg));
    }
    s += h;
    if (before_span && s >= S) {
      out.reached_span = true;
      out.at_span = x;
      if (rec) rec->samples.push_back({span, to_state(x)});
    } else if (rec && before_span) {
      rec->samples.push_back({s.convert_to<double>(), to_state(x)});
    }
    if (abs(x[2]) >= cstar) {
      out.g = x[2] > 0 ? 1 : -1;
      if (!out.reached_span) out.at_span = x;
      return out;
    }
  }
  return out;
}

double hp_gap(const HpState& a, const HpState& b) {
  double acc = 0.0;
  for (int j = 0; j < 4; ++j) {
    const double t = Real(a[j] - b[j]).convert_to<double>();
    acc += t * t;
  }
  return std::sqrt(acc);
}

std::string digits(const Real& x) {
  std::ostringstream os;
  os << std::setprecision(45) << x;
  return os.str();
}

}  // namespace

HeteroclinicResult find_heteroclinic(double theta_lo, double theta_hi, double theta_tol, const IntegrationConfig& cfg,
                                     const ShootOptions& opt) {
  cfg.validate();
  if (!(theta_tol > 0.0)) throw std::invalid_argument("theta_tol must be positive");
  if (!(theta_lo < theta_hi)) throw std::invalid_argument("bracket must satisfy lo < hi");
  const double eps0 = opt.eps0;
  auto g_of = [&](double th) { return classify_orbit({eps0, th}, cfg); };
  const auto r_lo = g_of(theta_lo), r_hi = g_of(theta_hi);
  if (r_lo.g != -1 || r_hi.g != 1) {
    std::ostringstream os;
    os << "bracket without sign change: g(" << theta_lo << ") = " << (r_lo.g ? std::to_string(*r_lo.g) : "none")
       << ", g(" << theta_hi << ") = " << (r_hi.g ? std::to_string(*r_hi.g) : "none");
    throw std::invalid_argument(os.str());
  }

  HeteroclinicResult res;
  double lo = theta_lo, hi = theta_hi;
  bool toggle = false;
  while (hi - lo >= theta_tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    ++res.iterations;
    const auto r = g_of(mid);
    if (r.g) {
      (*r.g < 0 ? lo : hi) = mid;
      continue;
    }
    // Span exhausted at the midpoint: it straddles the heteroclinic angle.
    // Narrow one side, alternating, probing the quarter point.
    const double p = toggle ? 0.5 * (mid + hi) : 0.5 * (lo + mid);
    const auto rp = g_of(p);
    if (rp.g) {
      (*rp.g < 0 ? lo : hi) = p;
    } else {
      (toggle ? hi : lo) = p;
    }
    toggle = !toggle;
  }
  res.theta_lo = lo;
  res.theta_hi = hi;
  res.theta_star = 0.5 * (lo + hi);
  res.theta_star_digits = digits(Real(res.theta_star));
  res.refined_width = hi - lo;

  const double span = cfg.max_span;
  if (opt.high_precision) {
    const double horizon = span + 30.0;
    Real a(lo), b(hi);
    HpRun ra = hp_run(eps0, a, span, horizon), rb = hp_run(eps0, b, span, horizon);
    if (ra.g != -1 || rb.g != 1) {
      a = Real(theta_lo);
      b = Real(theta_hi);
      ra = hp_run(eps0, a, span, horizon);
      rb = hp_run(eps0, b, span, horizon);
    }
    if (ra.g == -1 && rb.g == 1) {
      res.refined = true;
      const Real floor_width = Real("1e-45");
      for (int it = 0; it < opt.max_hp_iterations; ++it) {
        if (ra.reached_span && rb.reached_span && hp_gap(ra.at_span, rb.at_span) < opt.agree_tol) break;
        if (b - a < floor_width) break;
        const Real m = (a + b) / 2;
        ++res.refined_iterations;
        const HpRun rm = hp_run(eps0, m, span, horizon);
        if (rm.g == 0) {
          a = b = m;
          break;
        }
        if (rm.g < 0) {
          a = m;
          ra = rm;
        } else {
          b = m;
          rb = rm;
        }
      }
      const Real m = (a + b) / 2;
      res.theta_star = m.convert_to<double>();
      res.theta_star_digits = digits(m);
      res.refined_width = Real(b - a).convert_to<double>();
      HpRecord rec;
      const HpRun fin = hp_run(eps0, m, span, span, &rec);
      Trajectory traj;
      traj.d = Dimension(5);
      traj.samples = std::move(rec.samples);
      traj.segments = std::move(rec.segments);
      const State end = traj.final_state();
      traj.termination = {fin.reached_span ? TerminationKind::SpanExhausted : TerminationKind::EventStop,
                          traj.s_end(), end.norm(), std::nullopt};
      res.trajectory = std::move(traj);
      auto& r = res.result;
      r.theta = res.theta_star;
      r.end_state = end;
      r.end_s = res.trajectory.s_end();
      if (fin.g != 0) {
        r.g = fin.g;
        r.tau = r.end_s;
      }
    }
  }
  if (!res.refined) {
    auto co = classify_orbit_traj({eps0, res.theta_star}, cfg);
    res.result = co.result;
    res.trajectory = std::move(co.trajectory);
  }
  auto& r = res.result;
  res.end_distance = distance_to_target(r.end_state);
  res.track_in_C = track_in_region_C(res.trajectory);
  if (r.end_s >= span && !r.g && res.end_distance <= kHeteroclinicTol && res.track_in_C) {
    r.outcome = Outcome::HeteroclinicCandidate;
    r.diagnostics.clear();
  } else if (!r.g) {
    r.outcome = Outcome::Undecided;
    std::ostringstream os;
    os << "tightest bracket [" << std::setprecision(17) << res.theta_lo << ", " << res.theta_hi
       << "], end distance " << res.end_distance;
    r.diagnostics = os.str();
  }
  return res;
}

Vec4 eigen_coordinates(const State& x) {
  // Vandermonde system: x_j = sum_k c_k lambda_k^j.
  const std::array<double, 4> lam{-4.0, -2.0, 1.0, 3.0};
  Mat4 A;
  Vec4 rhs = x.vec();
  for (int j = 0; j < 4; ++j)
    for (int k = 0; k < 4; ++k) A[j][k] = std::pow(lam[k], j);
  for (int col = 0; col < 4; ++col) {
    int piv = col;
    for (int r = col + 1; r < 4; ++r)
      if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
    std::swap(A[piv], A[col]);
    std::swap(rhs[piv], rhs[col]);
    for (int r = col + 1; r < 4; ++r) {
      const double f = A[r][col] / A[col][col];
      for (int k = col; k < 4; ++k) A[r][k] -= f * A[col][k];
      rhs[r] -= f * rhs[col];
    }
  }
  Vec4 c{};
  for (int r = 3; r >= 0; --r) {
    double acc = rhs[r];
    for (int k = r + 1; k < 4; ++k) acc -= A[r][k] * c[k];
    c[r] = acc / A[r][r];
  }
  return c;
}

namespace {

double fit_slope(const std::vector<double>& s, const std::vector<double>& y) {
  const double n = static_cast<double>(s.size());
  double ms = 0, my = 0;
  for (size_t i = 0; i < s.size(); ++i) {
    ms += s[i];
    my += y[i];
  }
  ms /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (size_t i = 0; i < s.size(); ++i) {
    sxy += (s[i] - ms) * (y[i] - my);
    sxx += (s[i] - ms) * (s[i] - ms);
  }
  return sxy / sxx;
}

}  // namespace

DecayReport verify_unstable_decay(const SeedSpec& spec, const IntegrationConfig& cfg) {
  const State x0 = seed_state(spec);
  IntegrationConfig c = cfg;
  c.max_step = std::min(cfg.max_step, 0.05);
  c.max_span = 40.0;
  const double n0 = x0.norm();
  // Stop once the stable directions, amplified in reversed time, take over.
  const auto grown = EventWatch::custom("grown", [n0](const State& u) { return u.norm() - 2.0 * n0; });
  const Trajectory traj = integrate_reversed(Dimension(5), x0, c, {grown});

  DecayReport rep;
  rep.min_norm = n0;
  std::vector<double> s1, y1, s2, y2;
  bool open1 = true, open2 = true;
  const bool seed_inside = in_region_C(x0.phi, x0.d2phi, 0.0) != RegionClass::Outside ||
                           in_minus_C(x0.phi, x0.d2phi, 0.0) != RegionClass::Outside;
  for (const auto& smp : traj.samples) {
    const State x = time_reverse(smp.state);
    const double nrm = x.norm();
    if (nrm < rep.min_norm) {
      rep.min_norm = nrm;
      rep.sigma_at_min = smp.s;
    }
    const Vec4 cc = eigen_coordinates(x);
    const double stable = std::abs(cc[0]) + std::abs(cc[1]);
    const double floor = 1e-10 * nrm;
    if (open1 && std::abs(cc[2]) > 1e3 * stable && std::abs(cc[2]) > floor) {
      s1.push_back(smp.s);
      y1.push_back(std::log(std::abs(cc[2])));
    } else if (!s1.empty()) {
      open1 = false;
    }
    if (open2 && std::abs(cc[3]) > 1e3 * stable && std::abs(cc[3]) > floor) {
      s2.push_back(smp.s);
      y2.push_back(std::log(std::abs(cc[3])));
    } else if (!s2.empty()) {
      open2 = false;
    }
  }
  if (seed_inside) {
    for (const auto& smp : traj.samples) {
      if (smp.s > rep.sigma_at_min) break;
      const State& u = smp.state;
      if (in_region_C(u.phi, u.d2phi, 0.0) == RegionClass::Outside &&
          in_minus_C(u.phi, u.d2phi, 0.0) == RegionClass::Outside) {
        rep.stayed_in_C_or_minus_C = false;
        break;
      }
    }
  }
  rep.window1 = static_cast<int>(s1.size());
  rep.window2 = static_cast<int>(s2.size());
  rep.rate1 = s1.size() >= 2 ? -fit_slope(s1, y1) : std::numeric_limits<double>::quiet_NaN();
  rep.rate2 = s2.size() >= 2 ? -fit_slope(s2, y2) : std::numeric_limits<double>::quiet_NaN();
  return rep;
}

}  // namespace biharm
