#include "doctest.h"
#include "support.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "json.hpp"
#include "soficperm/json_io.hpp"
#include "soficperm/rng.hpp"

namespace fs = std::filesystem;
using soficperm::cli::RunConfig;
using soficperm::cli::run;
using soficperm::cli::run_command;

namespace {

const std::string kConfigs = SOFICPERM_CONFIG_DIR;

struct Result {
  int code;
  std::string out, err;
};

Result invoke(RunConfig cfg) {
  std::ostringstream out, err;
  const int code = run_command(cfg, out, err);
  return {code, out.str(), err.str()};
}

RunConfig make(const std::string& command, const std::string& config) {
  RunConfig cfg;
  cfg.command = command;
  cfg.config_path = config;
  return cfg;
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.starts_with("#")) continue;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

fs::path scratch_dir() {
  const auto dir = fs::temp_directory_path() / "soficperm_cli_test";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("identity spec gives exact one") {
  const auto r = invoke(make("exact-moment", kConfigs + "/identity_moment.json"));
  CHECK(r.code == 0);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0][2] == "exact");
  CHECK(rows[1][2] == "1");
}

TEST_CASE("random spec: exact column equals the oracle column") {
  std::mt19937_64 rng(51);
  const auto spec = testsupport::random_spec(5, 1, rng);
  const auto path = scratch_dir() / "random_spec.json";
  std::ofstream(path) << soficperm::moment_spec_to_json(spec).dump();
  const auto r = invoke(make("exact-moment", path.string()));
  CHECK(r.code == 0);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[1][2] == rows[1][8]);
  CHECK(rows[1][2] == soficperm::brute_force_moment(spec).get_str());
}

TEST_CASE("input errors exit 2") {
  const auto bad = scratch_dir() / "bad.json";
  std::ofstream(bad) << "{\"degree\": 3, ";
  CHECK(invoke(make("exact-moment", bad.string())).code == 2);
  const auto r = invoke(make("freeness-sweep", kConfigs + "/empty_word_sweep.json"));
  CHECK(r.code == 2);
  CHECK(r.err.find("nontrivial word") != std::string::npos);
  const auto noseed = scratch_dir() / "noseed.json";
  std::ofstream(noseed) << R"({"word": "x1 x2", "degrees": [8]})";
  CHECK(invoke(make("freeness-sweep", noseed.string())).code == 2);
  CHECK(invoke(make("no-such-command", "")).code == 2);
}

TEST_CASE("budget overrun exits 3") {
  auto cfg = make("exact-moment", kConfigs + "/shift_bound.json");
  cfg.budget = 10;
  CHECK(invoke(cfg).code == 3);
}

TEST_CASE("misaligned amalgam exits 4") {
  CHECK(invoke(make("amalgam", kConfigs + "/misaligned_amalgam.json")).code == 4);
}

TEST_CASE("sofic-check on an exact cyclic action") {
  auto cfg = make("sofic-check", kConfigs + "/cyclic_sofic.json");
  cfg.format = "json";
  const auto r = invoke(cfg);
  CHECK(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["summary"]["multiplicativity_defect"] == "0");
  CHECK(doc["summary"]["freeness_defect"] == "0");
  for (const auto& row : doc["rows"]) CHECK(row["dist_to_identity"] == (row["element"] == "[0]" ? "0" : "1"));
}

TEST_CASE("family checks") {
  CHECK(invoke(make("family-check", kConfigs + "/cycle_family.json")).code == 0);
  CHECK(invoke(make("family-check", kConfigs + "/transposition_family.json")).code == 1);
}

TEST_CASE("stochastic output is reproducible") {
  const auto dir = scratch_dir();
  auto cfg = make("freeness-sweep", kConfigs + "/commutator_sweep.json");
  cfg.samples = 150;
  std::ostringstream err;
  cfg.out_path = (dir / "a.csv").string();
  run(cfg, err);
  cfg.out_path = (dir / "b.csv").string();
  run(cfg, err);
  cfg.workers = 4;
  cfg.out_path = (dir / "c.csv").string();
  run(cfg, err);
  const auto a = slurp(dir / "a.csv");
  CHECK(!a.empty());
  CHECK(a == slurp(dir / "b.csv"));
  CHECK(a == slurp(dir / "c.csv"));
  cfg.seed = 12345;
  cfg.out_path = (dir / "d.csv").string();
  run(cfg, err);
  CHECK(a != slurp(dir / "d.csv"));
}

TEST_CASE("stochastic rows carry their seeds") {
  auto cfg = make("mc-moment", kConfigs + "/mc_moment.json");
  cfg.samples = 300;
  const auto r = invoke(cfg);
  CHECK(r.code == 0);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0][9] == "seed");
  CHECK(rows[1][9] == std::to_string(soficperm::derive_seed(314159, {0})));
}

TEST_CASE("tile and witness checks pass") {
  CHECK(invoke(make("tile-check", kConfigs + "/interval_tile.json")).code == 0);
  CHECK(invoke(make("sofic-check", kConfigs + "/truncated_witness.json")).code == 0);
  RunConfig lemmas;
  lemmas.command = "partition-lemmas";
  CHECK(invoke(lemmas).code == 0);
}
