#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace soficperm::cli {

enum ExitCode : int { kPass = 0, kAcceptanceFail = 1, kInputError = 2, kBudget = 3, kAlignment = 4 };

struct RunConfig {
  std::string command;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  unsigned workers = 1;
  std::string out_path;  // empty: stdout
  std::string format = "csv";
  std::uint64_t budget = 0;  // 0: library default
};

const std::vector<std::string>& command_names();

/// Runs one subcommand, writing results to `out` and diagnostics to `err`.
/// Library errors are mapped to exit codes here.
int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// run_command with --out handled: writes to the file when out_path is set.
int run(const RunConfig& cfg, std::ostream& err);

/// SOFICPERM_BUDGET if set and valid, otherwise 0.
std::uint64_t budget_from_env();

}  // namespace soficperm::cli
