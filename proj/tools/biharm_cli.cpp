// biharm: certificates, shooting, classification grids, winding profiles,
// energy audits and spectra from the command line.
//
// Exit codes: 0 success, 1 failure, 2 inconclusive, 64 usage error.

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "biharm/defaults.hpp"
#include "biharm/interval_cert.hpp"
#include "biharm/io.hpp"
#include "biharm/manifold.hpp"
#include "biharm/ode_core.hpp"
#include "biharm/profile.hpp"

using namespace biharm;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitInconclusive = 2;
constexpr int kExitUsage = 64;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Angle expressions for --theta-range: sums of terms built from numbers,
// "pi" and "theta0" with * and /, e.g. "-pi/2", "theta0+0.01".
class AngleParser {
 public:
  AngleParser(std::string s, double eps0) : s_(std::move(s)), eps0_(eps0) {}

  double parse() {
    const double v = sum();
    skip();
    if (pos_ != s_.size()) throw UsageError("bad angle expression: " + s_);
    return v;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && s_[pos_] == ' ') ++pos_;
  }
  double sum() {
    double v = product();
    for (;;) {
      skip();
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) {
        const char op = s_[pos_++];
        const double r = product();
        v = op == '+' ? v + r : v - r;
      } else {
        return v;
      }
    }
  }
  double product() {
    double v = factor();
    for (;;) {
      skip();
      if (pos_ < s_.size() && (s_[pos_] == '*' || s_[pos_] == '/')) {
        const char op = s_[pos_++];
        const double r = factor();
        v = op == '*' ? v * r : v / r;
      } else {
        return v;
      }
    }
  }
  double factor() {
    skip();
    if (pos_ < s_.size() && s_[pos_] == '-') {
      ++pos_;
      return -factor();
    }
    if (s_.compare(pos_, 6, "theta0") == 0) {
      pos_ += 6;
      return theta0(eps0_);
    }
    if (s_.compare(pos_, 2, "pi") == 0) {
      pos_ += 2;
      return kPi;
    }
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(s_.substr(pos_), &used);
    } catch (const std::exception&) {
      throw UsageError("bad angle expression: " + s_);
    }
    pos_ += used;
    return v;
  }

  std::string s_;
  double eps0_;
  std::size_t pos_ = 0;
};

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  if (!is) throw UsageError("cannot read " + p.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

fs::path sibling(const fs::path& out, const std::string& suffix) {
  auto p = out;
  p.replace_extension();
  p += suffix;
  return p;
}

std::chrono::steady_clock::time_point g_start = std::chrono::steady_clock::now();

void write_manifest(RunManifest m, const fs::path& out) {
  m.wall_ms = elapsed_ms(g_start);
  m.tool_version = defaults::kToolVersion;
  m.rounding_mode = kRoundingMode;
  write_atomic(manifest_path(out), to_json(m).dump(2) + "\n");
}

IntegrationConfig integration_config(double span, double blowup_norm) {
  IntegrationConfig cfg;
  cfg.max_span = span;
  cfg.blowup_norm = blowup_norm;
  cfg.validate();
  return cfg;
}

// Options shared by the subcommands, all resolved into the manifest.
struct Options {
  // verify
  std::string task = "all";
  double min_width = 0.0;  // 0: per-task default
  int threads = 0;
  // shooting and grids
  int d = 5;
  double eps0 = defaults::kEps0;
  double theta_tol = defaults::kThetaTol;
  double span = defaults::kMaxSpan;
  bool no_refine = false;
  int grid = defaults::kGridPoints;
  std::string theta_range = "-pi/2:theta0";
  // wind
  std::string theta;  // empty: theta0 + offset
  double blowup_norm = defaults::kBlowupNorm;
  // energy
  std::string mode = "conservation";
  int orbits = defaults::kEnergyOrbits;
  double energy_span = defaults::kEnergySpan;
  double energy_cap = defaults::kEnergyBlowupNorm;
  unsigned long seed = 1;
  // spectrum
  std::string parity = "even";
  std::string out;
};

int cmd_verify(const Options& o, RunManifest& m) {
  std::vector<TaskId> tasks;
  if (o.task == "all" || o.task == "ALL") {
    tasks = all_tasks();
  } else {
    try {
      tasks.push_back(parse_task_id(o.task));
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  if (o.min_width < 0.0) throw UsageError("--min-width must be positive");
  const fs::path out = o.out.empty() ? "certificates.json" : o.out;
  BnbOptions bo;
  bo.threads = o.threads;
  json arr = json::array();
  CertStatus overall = CertStatus::Proved;
  for (TaskId t : tasks) {
    std::optional<double> mw;
    if (o.min_width > 0.0) mw = o.min_width;
    const Certificate c = run_task(t, mw, bo);
    overall = worst(overall, c.status);
    arr.push_back(to_json(c));
    m.results[to_string(t)] = to_string(c.status);
    std::cout << to_string(t) << ' ' << to_string(c.status) << " boxes=" << c.boxes_examined
              << " wall_ms=" << std::fixed << std::setprecision(1) << c.wall_ms << std::defaultfloat << '\n';
  }
  write_atomic(out, json{{"certificates", arr}}.dump(2) + "\n");
  m.outputs.push_back(out.string());
  m.parameters = {{"task", o.task}, {"min-width", o.min_width}, {"threads", o.threads}, {"out", out.string()}};
  write_manifest(m, out);
  switch (overall) {
    case CertStatus::Proved: return kExitOk;
    case CertStatus::Inconclusive: return kExitInconclusive;
    case CertStatus::Failed: return kExitFail;
  }
  return kExitFail;
}

int cmd_shoot(const Options& o, RunManifest& m) {
  if (o.d != 5) throw UsageError("shooting is implemented for d = 5 only");
  if (!(o.eps0 > 0.0 && o.eps0 <= 0.1)) throw UsageError("--eps0 must lie in (0, 0.1]");
  if (!(o.theta_tol > 0.0)) throw UsageError("--theta-tol must be positive");
  const fs::path out = o.out.empty() ? "heteroclinic.json" : o.out;
  const fs::path orbit = sibling(out, "_orbit.csv");
  m.parameters = {{"d", o.d},       {"eps0", o.eps0},           {"theta-tol", o.theta_tol},
                  {"span", o.span}, {"no-refine", o.no_refine}, {"out", out.string()}};
  const auto cfg = integration_config(o.span, defaults::kBlowupNorm);
  ShootOptions so;
  so.eps0 = o.eps0;
  so.high_precision = !o.no_refine;
  const auto br = default_bracket(o.eps0);
  HeteroclinicResult r;
  try {
    r = find_heteroclinic(br[0], br[1], o.theta_tol, cfg, so);
  } catch (const std::invalid_argument& e) {
    std::cerr << "shoot: " << e.what() << '\n';
    m.results["error"] = e.what();
    write_manifest(m, out);
    return kExitFail;
  }
  write_atomic(out, to_json(r, o.eps0, o.span).dump(2) + "\n");
  std::ostringstream csv;
  write_csv(r.trajectory, csv);
  write_atomic(orbit, csv.str());
  m.outputs = {out.string(), orbit.string()};
  m.results = {{"outcome", to_string(r.result.outcome)},
               {"theta_star", r.theta_star_digits},
               {"double_bracket_width", r.theta_hi - r.theta_lo},
               {"refined_width", r.refined_width},
               {"end_distance", r.end_distance}};
  write_manifest(m, out);
  std::cout << "theta* = " << r.theta_star_digits << "\nbracket width (double) = " << r.theta_hi - r.theta_lo
            << "\nrefined width = " << r.refined_width << "\noutcome = " << to_string(r.result.outcome)
            << "\nend distance = " << r.end_distance << '\n';
  return r.result.outcome == Outcome::HeteroclinicCandidate ? kExitOk : kExitInconclusive;
}

int cmd_classify(const Options& o, RunManifest& m) {
  if (o.grid < 2) throw UsageError("--grid must be at least 2");
  if (!(o.eps0 > 0.0 && o.eps0 <= 0.1)) throw UsageError("--eps0 must lie in (0, 0.1]");
  const auto colon = o.theta_range.find(':');
  if (colon == std::string::npos) throw UsageError("--theta-range must be a:b");
  const double a = AngleParser(o.theta_range.substr(0, colon), o.eps0).parse();
  const double b = AngleParser(o.theta_range.substr(colon + 1), o.eps0).parse();
  if (!(std::isfinite(a) && std::isfinite(b) && a < b)) throw UsageError("invalid theta range");
  const fs::path out = o.out.empty() ? "classification.csv" : o.out;
  const auto cfg = integration_config(o.span, defaults::kBlowupNorm);
  const auto grid = classify_grid(a, b, o.grid, o.eps0, cfg, o.threads);
  std::ostringstream csv;
  write_grid_csv(grid, csv);
  write_atomic(out, csv.str());
  json outcomes = json::array();
  for (const auto& r : grid) outcomes.push_back(to_string(r.outcome));
  const int changes = count_sign_changes(grid);
  m.parameters = {{"grid", o.grid}, {"theta-range", o.theta_range}, {"eps0", o.eps0},
                  {"span", o.span}, {"threads", o.threads},         {"out", out.string()}};
  m.outputs = {out.string()};
  m.results = {{"outcomes", outcomes}, {"sign_changes", changes}};
  write_manifest(m, out);
  std::cout << "points=" << o.grid << " sign_changes=" << changes << '\n';
  return kExitOk;
}

int cmd_wind(const Options& o, RunManifest& m) {
  if (!(o.blowup_norm > 0.0)) throw UsageError("--blowup-norm must be positive");
  WindingSeed seed;
  seed.eps0 = o.eps0;
  if (!o.theta.empty()) seed.theta = AngleParser(o.theta, o.eps0).parse();
  const fs::path out = o.out.empty() ? "winding.csv" : o.out;
  const fs::path report = sibling(out, "_report.json");
  m.parameters = {{"theta", o.theta}, {"eps0", o.eps0}, {"blowup-norm", o.blowup_norm},
                  {"span", o.span},   {"out", out.string()}};
  WindingResult w;
  try {
    w = build_winding_profile(integration_config(o.span, o.blowup_norm), seed);
  } catch (const NoBlowupError& e) {
    std::cerr << "wind: " << e.what() << '\n';
    m.results["error"] = e.what();
    write_manifest(m, out);
    return kExitFail;
  }
  std::ostringstream csv;
  write_profile_csv(w.profile, Dimension(5), csv);
  write_atomic(out, csv.str());
  write_atomic(report, to_json(w.report, w.diagnostics).dump(2) + "\n");
  m.outputs = {out.string(), report.string()};
  m.results = {{"winding_count", w.report.winding_count}, {"s_f_estimate", w.report.s_f_estimate}};
  write_manifest(m, out);
  std::cout << "winding_count=" << w.report.winding_count << " s_f=" << std::setprecision(12)
            << w.report.s_f_estimate << '\n';
  return kExitOk;
}

int cmd_energy(const Options& o, RunManifest& m) {
  EnergyMode mode;
  if (o.mode == "conservation") {
    mode = EnergyMode::Conservation;
  } else if (o.mode == "monotonicity") {
    mode = EnergyMode::Monotonicity;
  } else {
    throw UsageError("--mode must be conservation or monotonicity");
  }
  if (o.orbits < 1) throw UsageError("--orbits must be positive");
  const Dimension d(o.d);
  const fs::path out = o.out.empty() ? "energy.json" : o.out;
  const auto a = energy_audit(d, mode, o.orbits, o.energy_span, integration_config(o.energy_span, o.energy_cap),
                              o.seed);
  m.parameters = {{"d", o.d},       {"mode", o.mode},         {"orbits", o.orbits}, {"span", o.energy_span},
                  {"blowup-norm", o.energy_cap}, {"seed", o.seed}, {"out", out.string()}};
  m.results = {{"worst_defect", a.worst_defect}, {"worst_orbit", a.worst_orbit}};
  write_atomic(out, json{{"d", o.d}, {"mode", o.mode}, {"orbits", a.orbits}, {"worst_defect", a.worst_defect},
                         {"worst_orbit", a.worst_orbit}}
                        .dump(2) + "\n");
  m.outputs = {out.string()};
  write_manifest(m, out);
  std::cout << "mode=" << o.mode << " d=" << o.d << " worst_defect=" << std::setprecision(6) << a.worst_defect
            << '\n';
  return kExitOk;
}

int cmd_spectrum(const Options& o, RunManifest& m) {
  Parity p;
  if (o.parity == "even") {
    p = Parity::Even;
  } else if (o.parity == "odd") {
    p = Parity::Odd;
  } else {
    throw UsageError("--parity must be even or odd");
  }
  const Dimension d(o.d);
  const auto lin = linearization(d, p);
  const fs::path out = o.out.empty() ? "spectrum.json" : o.out;
  json j{{"d", o.d}, {"parity", o.parity}, {"matrix", lin.matrix}};
  std::cout << "matrix (" << o.parity << " parity, d = " << o.d << "):\n";
  for (const auto& row : lin.matrix) {
    for (double v : row) std::cout << std::setw(14) << std::setprecision(8) << v;
    std::cout << '\n';
  }
  if (p == Parity::Even) {
    j["eigenvalues"] = lin.eigenvalues;
    j["eigenvectors"] = lin.eigenvectors;
    std::cout << "eigenvalues:";
    for (double v : lin.eigenvalues) std::cout << ' ' << v;
    std::cout << '\n';
    for (int k = 0; k < 4; ++k) {
      std::cout << "  " << lin.eigenvalues[k] << ":";
      for (double v : lin.eigenvectors[k]) std::cout << ' ' << v;
      std::cout << '\n';
    }
  }
  write_atomic(out, j.dump(2) + "\n");
  m.parameters = {{"d", o.d}, {"parity", o.parity}, {"out", out.string()}};
  m.outputs = {out.string()};
  write_manifest(m, out);
  return kExitOk;
}

// Turns manifest parameters back into command-line arguments.
std::vector<std::string> replay_args(const RunManifest& m) {
  std::vector<std::string> args{"biharm", m.command};
  for (const auto& [k, v] : m.parameters.items()) {
    if (v.is_boolean()) {
      if (v.get<bool>()) args.push_back("--" + k);
      continue;
    }
    if (v.is_string() && v.get<std::string>().empty()) continue;
    args.push_back("--" + k);
    if (v.is_string()) {
      args.push_back(v.get<std::string>());
    } else if (v.is_number_float()) {
      std::ostringstream os;
      os << std::setprecision(17) << v.get<double>();
      args.push_back(os.str());
    } else {
      args.push_back(v.dump());
    }
  }
  return args;
}

int run(std::vector<std::string> args, const json* expect = nullptr);

int run(std::vector<std::string> args, const json* expect) {
  CLI::App app{"Biharmonic map profile toolkit"};
  app.require_subcommand(0, 1);
  Options o;
  std::string config;
  app.add_option("--config", config, "Replay a run manifest");

  auto* verify = app.add_subcommand("verify", "Run interval certificates");
  verify->add_option("--task", o.task, "V1..V9 or all");
  verify->add_option("--min-width", o.min_width, "Smallest box width before Inconclusive");
  verify->add_option("--threads", o.threads, "Worker threads (default BIHARM_THREADS or hardware)");
  verify->add_option("--out", o.out, "Certificate JSON path");

  auto* shoot = app.add_subcommand("shoot", "Locate the heteroclinic orbit");
  shoot->add_option("--d", o.d, "Dimension (5 only)");
  shoot->add_option("--eps0", o.eps0, "Seeding radius");
  shoot->add_option("--theta-tol", o.theta_tol, "Double-precision bisection width");
  shoot->add_option("--span", o.span, "Integration span");
  shoot->add_flag("--no-refine", o.no_refine, "Skip the 50-digit refinement");
  shoot->add_option("--out", o.out, "Report JSON path");

  auto* classify = app.add_subcommand("classify", "Classify seeds over a theta grid");
  classify->add_option("--grid", o.grid, "Number of grid points");
  classify->add_option("--theta-range", o.theta_range, "a:b, with pi and theta0 allowed");
  classify->add_option("--eps0", o.eps0, "Seeding radius");
  classify->add_option("--span", o.span, "Integration span");
  classify->add_option("--threads", o.threads, "Worker threads");
  classify->add_option("--out", o.out, "CSV path");

  auto* wind = app.add_subcommand("wind", "Winding profile up to blowup");
  wind->add_option("--theta", o.theta, "Seed angle (default theta0 + 0.2)");
  wind->add_option("--eps0", o.eps0, "Seeding radius");
  wind->add_option("--blowup-norm", o.blowup_norm, "Norm at which integration stops");
  wind->add_option("--span", o.span, "Integration span");
  wind->add_option("--out", o.out, "Profile CSV path");

  auto* energy = app.add_subcommand("energy", "Energy conservation or monotonicity audit");
  energy->add_option("--d", o.d, "Dimension");
  energy->add_option("--mode", o.mode, "conservation or monotonicity");
  energy->add_option("--orbits", o.orbits, "Number of random orbits");
  energy->add_option("--span", o.energy_span, "Span per orbit");
  energy->add_option("--blowup-norm", o.energy_cap, "Norm cap per orbit");
  energy->add_option("--seed", o.seed, "Random seed");
  energy->add_option("--out", o.out, "Report JSON path");

  auto* spectrum = app.add_subcommand("spectrum", "Linearization at the origin");
  spectrum->add_option("--d", o.d, "Dimension");
  spectrum->add_option("--parity", o.parity, "even or odd");
  spectrum->add_option("--out", o.out, "JSON path");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  if (!config.empty()) {
    RunManifest m;
    try {
      m = manifest_from_json(json::parse(slurp(config)));
    } catch (const UsageError& e) {
      std::cerr << "biharm: " << e.what() << '\n';
      return kExitUsage;
    } catch (const std::exception& e) {
      std::cerr << "biharm: bad manifest: " << e.what() << '\n';
      return kExitUsage;
    }
    std::cout << "replaying " << m.command << '\n';
    return run(replay_args(m), &m.results);
  }

  RunManifest m;
  g_start = std::chrono::steady_clock::now();
  int rc = kExitUsage;
  try {
    if (verify->parsed()) {
      m.command = "verify";
      rc = cmd_verify(o, m);
    } else if (shoot->parsed()) {
      m.command = "shoot";
      rc = cmd_shoot(o, m);
    } else if (classify->parsed()) {
      m.command = "classify";
      rc = cmd_classify(o, m);
    } else if (wind->parsed()) {
      m.command = "wind";
      rc = cmd_wind(o, m);
    } else if (energy->parsed()) {
      m.command = "energy";
      rc = cmd_energy(o, m);
    } else if (spectrum->parsed()) {
      m.command = "spectrum";
      rc = cmd_spectrum(o, m);
    } else {
      std::cout << app.help();
      return kExitUsage;
    }
  } catch (const UsageError& e) {
    std::cerr << "biharm: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "biharm: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "biharm: " << e.what() << '\n';
    return kExitFail;
  }

  if (expect && m.command == "verify") {
    // Statuses must reproduce exactly; other results may carry timings.
    for (const auto& [k, v] : expect->items()) {
      if (!m.results.contains(k) || m.results[k] != v) {
        std::cerr << "replay mismatch for " << k << ": expected " << v.dump() << '\n';
        return kExitFail;
      }
    }
    std::cout << "replay reproduced all statuses\n";
  } else if (expect && m.command == "classify") {
    if (expect->value("outcomes", json()) != m.results["outcomes"]) {
      std::cerr << "replay mismatch in classification outcomes\n";
      return kExitFail;
    }
    std::cout << "replay reproduced all outcomes\n";
  }
  return rc;
}

}  // namespace

int main(int argc, char** argv) { return run(std::vector<std::string>(argv, argv + argc)); }
