#pragma once

// JSON forms of certificates, shooting and winding reports, and run
// manifests. Interval endpoints are written both in decimal and as exact
// dyadic rationals.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "biharm/interval_cert.hpp"
#include "biharm/manifold.hpp"
#include "biharm/profile.hpp"

namespace biharm {

using json = nlohmann::json;

/// Exact value of a finite double as "m/2^k" or an integer, e.g. "779/1024".
/// Denominators up to 2^62 are written in decimal, larger ones as "m/2^k".
std::string dyadic_string(double x);
/// Inverse of dyadic_string.
double parse_dyadic(const std::string& s);

json to_json(const Interval& x);
json to_json(const Box& b);
json to_json(const State& x);
json to_json(const Certificate& c);
json to_json(const ClassificationResult& r);
json to_json(const HeteroclinicResult& r, double eps0, double span);
json to_json(const WindingReport& w, const BlowupDiagnostics& diag);

Interval interval_from_json(const json& j);
Box box_from_json(const json& j);

struct RunManifest {
  std::string command;
  json parameters = json::object();
  std::string tool_version;
  std::string rounding_mode;
  double wall_ms = 0.0;
  std::vector<std::string> outputs;
  json results = json::object();
};

json to_json(const RunManifest& m);
RunManifest manifest_from_json(const json& j);

/// Writes text to path through a temporary file and a rename.
void write_atomic(const std::filesystem::path& path, const std::string& text);

/// Sidecar manifest path for an output: "<path>.manifest.json".
std::filesystem::path manifest_path(const std::filesystem::path& output);

}  // namespace biharm
