#include "biharm/io.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>

namespace biharm {

std::string dyadic_string(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("dyadic form of a non-finite value");
  if (x == 0.0) return "0";
  int e = 0;
  const double f = std::frexp(std::abs(x), &e);
  auto m = static_cast<std::uint64_t>(std::ldexp(f, 53));
  int k = 53 - e;  // |x| = m / 2^k
  while (k > 0 && (m & 1u) == 0) {
    m >>= 1;
    --k;
  }
  std::string out = x < 0 ? "-" : "";
  if (k <= 0) {
    // Integer valued; exact when it fits, which covers every certificate box.
    if (-k <= 10) return out + std::to_string(m << -k);
    return out + std::to_string(m) + "*2^" + std::to_string(-k);
  }
  if (k <= 62) return out + std::to_string(m) + "/" + std::to_string(std::uint64_t{1} << k);
  return out + std::to_string(m) + "/2^" + std::to_string(k);
}

double parse_dyadic(const std::string& s) {
  const auto star = s.find("*2^");
  if (star != std::string::npos) return std::ldexp(std::stod(s.substr(0, star)), std::stoi(s.substr(star + 3)));
  const auto slash = s.find('/');
  if (slash == std::string::npos) return std::stod(s);
  const double num = static_cast<double>(std::stoll(s.substr(0, slash)));
  const std::string den = s.substr(slash + 1);
  if (den.rfind("2^", 0) == 0) return std::ldexp(num, -std::stoi(den.substr(2)));
  const auto d = std::stoull(den);
  int k = 0;
  while ((std::uint64_t{1} << k) < d) ++k;
  if ((std::uint64_t{1} << k) != d) throw std::invalid_argument("denominator is not a power of two: " + s);
  return std::ldexp(num, -k);
}

json to_json(const Interval& x) {
  return {{"lo", x.lo()}, {"hi", x.hi()}, {"lo_exact", dyadic_string(x.lo())}, {"hi_exact", dyadic_string(x.hi())}};
}

json to_json(const Box& b) {
  json a = json::array();
  for (const auto& x : b.dims) a.push_back(to_json(x));
  return a;
}

json to_json(const State& x) { return {x.phi, x.dphi, x.d2phi, x.d3phi}; }

Interval interval_from_json(const json& j) {
  if (j.contains("lo_exact")) {
    return {parse_dyadic(j.at("lo_exact").get<std::string>()), parse_dyadic(j.at("hi_exact").get<std::string>())};
  }
  return {j.at("lo").get<double>(), j.at("hi").get<double>()};
}

Box box_from_json(const json& j) {
  Box b;
  for (const auto& x : j) b.dims.push_back(interval_from_json(x));
  return b;
}

namespace {
template <class T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}
}  // namespace

json to_json(const Certificate& c) {
  json j;
  j["task_id"] = c.task ? json(to_string(*c.task)) : json(nullptr);
  json regs = json::array();
  for (const auto& r : c.regions) regs.push_back({{"coords", r.coords}, {"box", to_json(r.box)}});
  j["region"] = regs;
  j["target"] = c.target;
  j["status"] = to_string(c.status);
  j["witness"] = c.witness ? to_json(*c.witness) : json(nullptr);
  j["boxes_examined"] = c.boxes_examined;
  j["max_depth"] = c.max_depth;
  j["min_width"] = c.min_width;
  j["rounding_mode"] = c.rounding_mode;
  j["wall_ms"] = c.wall_ms;
  j["certified_min"] = opt(c.certified_min);
  if (c.taylor) j["taylor"] = {{"phi0_cubed", to_json(c.taylor->phi0_cubed)}, {"phi", to_json(c.taylor->phi)}};
  if (c.sublevel) j["sublevel"] = to_json(*c.sublevel);
  if (c.sublevel_reference) j["sublevel_reference"] = to_json(*c.sublevel_reference);
  if (c.sublevel_equals_reference) j["sublevel_equals_reference"] = *c.sublevel_equals_reference;
  if (c.sample_points > 0) j["sample_points"] = c.sample_points;
  return j;
}

json to_json(const ClassificationResult& r) {
  return {{"theta", r.theta},   {"outcome", to_string(r.outcome)}, {"g", opt(r.g)},
          {"tau", opt(r.tau)},  {"end_s", r.end_s},                {"end_state", to_json(r.end_state)},
          {"diagnostics", r.diagnostics}};
}

json to_json(const HeteroclinicResult& r, double eps0, double span) {
  return {{"theta_star", r.theta_star},
          {"theta_star_digits", r.theta_star_digits},
          {"bracket", {r.theta_lo, r.theta_hi}},
          {"bracket_width", r.theta_hi - r.theta_lo},
          {"iterations", r.iterations},
          {"refined", r.refined},
          {"refined_width", r.refined_width},
          {"refined_iterations", r.refined_iterations},
          {"eps0", eps0},
          {"span", span},
          {"end_distance", r.end_distance},
          {"track_in_C", r.track_in_C},
          {"classification", to_json(r.result)}};
}

json to_json(const WindingReport& w, const BlowupDiagnostics& diag) {
  return {{"s_f_estimate", w.s_f_estimate},
          {"crossings", w.crossings},
          {"winding_count", w.winding_count},
          {"seed", {{"theta", w.theta}, {"eps0", w.eps0}}},
          {"reflected", w.reflected},
          {"blowup_norm", w.blowup_norm},
          {"fit_r2", diag.fit_r2},
          {"fit_samples", diag.fit_samples}};
}

json to_json(const RunManifest& m) {
  return {{"command", m.command},
          {"parameters", m.parameters},
          {"tool_version", m.tool_version},
          {"rounding_mode", m.rounding_mode},
          {"wall_ms", m.wall_ms},
          {"outputs", m.outputs},
          {"results", m.results}};
}

RunManifest manifest_from_json(const json& j) {
  RunManifest m;
  m.command = j.at("command").get<std::string>();
  m.parameters = j.at("parameters");
  m.tool_version = j.value("tool_version", "");
  m.rounding_mode = j.value("rounding_mode", "");
  m.wall_ms = j.value("wall_ms", 0.0);
  m.outputs = j.value("outputs", std::vector<std::string>{});
  m.results = j.value("results", json::object());
  return m;
}

void write_atomic(const std::filesystem::path& path, const std::string& text) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write " + tmp.string());
    os << text;
    if (!os) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::filesystem::path manifest_path(const std::filesystem::path& output) {
  auto p = output;
  p += ".manifest.json";
  return p;
}

}  // namespace biharm
