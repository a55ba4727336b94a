#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "biharm/io.hpp"

using namespace biharm;
namespace fs = std::filesystem;

namespace {

const fs::path& workdir() {
  static const fs::path d = [] {
    const fs::path p = fs::temp_directory_path() / "biharm_cli_test";
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return d;
}

int cli(const std::string& args) {
  const std::string cmd = "cd '" + workdir().string() + "' && '" BIHARM_CLI "' " + args + " > last.log 2>&1";
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(workdir() / p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

json read_json(const fs::path& p) { return json::parse(slurp(p)); }

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream is(slurp(p));
  std::string line;
  while (std::getline(is, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string c;
    while (std::getline(ls, c, ',')) cells.push_back(c);
    rows.push_back(cells);
  }
  return rows;
}

void check_csv(const fs::path& p, const std::vector<std::string>& header) {
  const auto rows = read_csv(p);
  REQUIRE(rows.size() > 1);
  CHECK(rows[0] == header);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    REQUIRE(rows[i].size() == header.size());
  }
}

void check_manifest(const fs::path& out, const std::string& command) {
  const json m = read_json(manifest_path(out));
  CHECK(m["command"] == command);
  CHECK(m["tool_version"] == defaults::kToolVersion);
  CHECK(m["rounding_mode"] == kRoundingMode);
  CHECK(m["wall_ms"].get<double>() >= 0);
  CHECK(m["parameters"].is_object());
  for (const auto& o : m["outputs"]) CHECK(fs::exists(workdir() / o.get<std::string>()));
}

}  // namespace

TEST_CASE("usage errors") {
  CHECK(cli("") == 64);
  CHECK(cli("bogus") == 64);
  CHECK(cli("verify --task V10") == 64);
  CHECK(cli("verify --task V1 --nope") == 64);
  CHECK(cli("classify --grid 1") == 64);
  CHECK(cli("classify --grid 10 --theta-range 1:0") == 64);
  CHECK(cli("classify --grid 10 --theta-range x:y") == 64);
  CHECK(cli("shoot --d 6") == 64);
  CHECK(cli("energy --mode sideways") == 64);
  CHECK(cli("spectrum --d 2") == 64);
  CHECK(cli("spectrum --parity weird") == 64);
  CHECK(cli("--config missing.json") == 64);
  CHECK(cli("--help") == 0);
}

TEST_CASE("verify") {
  CHECK(cli("verify --task all --out certs.json") == 0);
  const json j = read_json("certs.json");
  REQUIRE(j["certificates"].size() == 9);
  for (const auto& c : j["certificates"]) {
    CHECK(c["status"] == "Proved");
    for (const char* k : {"task_id", "region", "target", "witness", "boxes_examined", "max_depth", "min_width",
                          "rounding_mode", "wall_ms"})
      CHECK(c.contains(k));
    for (const auto& r : c["region"])
      for (const auto& x : r["box"]) CHECK(interval_from_json(x) == Interval(x["lo"].get<double>(), x["hi"].get<double>()));
  }
  check_manifest("certs.json", "verify");
  CHECK(cli("--config certs.json.manifest.json") == 0);

  CHECK(cli("verify --task V2 --min-width 10 --out coarse.json") == 2);
  CHECK(read_json("coarse.json")["certificates"][0]["status"] == "Inconclusive");
  CHECK(cli("--config coarse.json.manifest.json") == 2);

  // A tampered manifest no longer reproduces.
  json m = read_json("coarse.json.manifest.json");
  m["results"]["V2"] = "Proved";
  std::ofstream(workdir() / "tampered.json") << m.dump();
  CHECK(cli("--config tampered.json") == 1);
}

TEST_CASE("classify") {
  CHECK(cli("classify --grid 200 --theta-range=-pi/2:theta0 --out grid.csv") == 0);
  check_csv("grid.csv", {"theta", "outcome", "g", "tau", "end_s", "phi", "dphi", "d2phi", "d3phi"});
  const auto rows = read_csv("grid.csv");
  CHECK(rows.size() == 201);
  int changes = 0;
  for (std::size_t i = 2; i < rows.size(); ++i) changes += rows[i][2] != rows[i - 1][2];
  CHECK(changes == 1);
  check_manifest("grid.csv", "classify");
  CHECK(read_json("grid.csv.manifest.json")["results"]["sign_changes"] == 1);
  CHECK(cli("--config grid.csv.manifest.json") == 0);

  CHECK(cli("classify --grid 50 --theta-range theta0+0.01:pi/2 --out plus.csv") == 0);
  const auto plus = read_csv("plus.csv");
  REQUIRE(plus.size() == 51);
  for (std::size_t i = 1; i < plus.size(); ++i) CHECK(plus[i][2] == "1");
}

TEST_CASE("energy and spectrum") {
  CHECK(cli("energy --d 4 --mode conservation --out e4.json") == 0);
  CHECK(read_json("e4.json")["worst_defect"].get<double>() < 1e-7);
  CHECK(cli("energy --d 5 --mode monotonicity --out e5.json") == 0);
  CHECK(read_json("e5.json")["worst_defect"].get<double>() > -1e-8);
  check_manifest("e5.json", "energy");

  CHECK(cli("spectrum --d 5 --parity even --out sp.json") == 0);
  const json s = read_json("sp.json");
  std::vector<double> ev = s["eigenvalues"];
  std::sort(ev.begin(), ev.end());
  CHECK(ev == std::vector<double>{-4, -2, 1, 3});
  CHECK(s["matrix"].size() == 4);
  CHECK(cli("spectrum --d 5 --parity odd --out spo.json") == 0);
  CHECK_FALSE(read_json("spo.json").contains("eigenvalues"));
  check_manifest("spo.json", "spectrum");
}

TEST_CASE("wind") {
  CHECK(cli("wind --out wind.csv") == 0);
  check_csv("wind.csv", {"r", "psi", "dpsi", "d2psi", "L0f0", "L1f1"});
  const json r = read_json("wind_report.json");
  for (const char* k : {"s_f_estimate", "crossings", "winding_count", "seed"}) CHECK(r.contains(k));
  CHECK(r["winding_count"].get<int>() == static_cast<int>(r["crossings"].size()));
  check_manifest("wind.csv", "wind");
  CHECK(cli("wind --span 1 --out nowind.csv") == 1);
}

TEST_CASE("shoot") {
  CHECK(cli("shoot --out het.json") == 0);
  const json h = read_json("het.json");
  CHECK(h["end_distance"].get<double>() < 1e-3);
  CHECK(h["classification"]["outcome"] == "HeteroclinicCandidate");
  CHECK(h["track_in_C"] == true);
  check_csv("het_orbit.csv", {"s", "phi", "dphi", "d2phi", "d3phi", "energy_total", "energy_rate"});
  check_manifest("het.json", "shoot");

  CHECK(cli("shoot --theta-tol 1e-14 --out het14.json") == 0);
  const json m = read_json("het14.json.manifest.json");
  CHECK(m["results"]["double_bracket_width"].get<double>() > 0);
  CHECK(m["results"]["double_bracket_width"].get<double>() < 1e-13);
}
