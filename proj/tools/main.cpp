#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace soficperm::cli;
  CLI::App app{"soficperm: permutation moments, partition lemmas, quasi-actions and freeness sweeps"};
  app.require_subcommand(1);

  RunConfig cfg;
  cfg.budget = budget_from_env();
  std::uint64_t seed = 0;
  std::size_t samples = 0;

  for (const auto& name : command_names()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", cfg.config_path, "JSON configuration file")->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "master seed");
    sub->add_option("--samples", samples, "Monte Carlo samples per estimate");
    sub->add_option("--workers", cfg.workers, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--out", cfg.out_path, "output file (default stdout)");
    sub->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--budget", cfg.budget, "exact-enumeration budget on d^{4n}");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInputError;
  }

  for (auto* sub : app.get_subcommands()) {
    cfg.command = sub->get_name();
    if (sub->count("--seed")) cfg.seed = seed;
    if (sub->count("--samples")) cfg.samples = samples;
  }
  return run(cfg, std::cerr);
}
