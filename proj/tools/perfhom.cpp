// perfhom: declarative runner for the perforated-domain homogenization experiments.
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "perfhom/acceptance.hpp"
#include "perfhom/config.hpp"
#include "perfhom/report.hpp"

namespace {

struct Overrides {
  std::optional<std::string> out;
  std::optional<int> workers;
  std::optional<std::uint64_t> seed;
};

perfhom::ExperimentConfig load(const std::string& path, const Overrides& o) {
  auto config = perfhom::load_config(path);
  if (o.out) config.out_dir = *o.out;
  if (o.workers) config.workers = *o.workers;
  if (o.seed) config.seed = *o.seed;
  perfhom::validate_config(config);
  return config;
}

int execute(const std::string& path, const Overrides& o, bool cell_only) {
  const auto config = load(path, o);
  const auto report = perfhom::run_experiment(config, cell_only);
  for (const auto& file : perfhom::write_outputs(report, config.out_dir)) std::cout << file << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Homogenization toolkit for degenerate elliptic operators on perforated domains"};
  app.require_subcommand(1);
  app.fallthrough();
  Overrides overrides;
  std::string out, config_path;
  int workers = 1;
  std::uint64_t seed = 0;
  auto* out_opt = app.add_option("--out", out, "Output directory (overrides the config)");
  auto* workers_opt = app.add_option("--workers", workers, "Concurrent eps-instances")->check(CLI::PositiveNumber);
  auto* seed_opt = app.add_option("--seed", seed, "Seed for the randomized probes");

  auto* run = app.add_subcommand("run", "Run the experiment described by a config file");
  run->add_option("config", config_path, "Experiment config (YAML)")->required()->check(CLI::ExistingFile);
  auto* cell = app.add_subcommand("cell", "Solve only the cell problem of a config");
  cell->add_option("config", config_path, "Experiment config (YAML)")->required()->check(CLI::ExistingFile);
  auto* check = app.add_subcommand("check", "Run the built-in acceptance suite");
  std::vector<int> only;
  check->add_option("--only", only, "Criterion ids to run (default: all)");

  CLI11_PARSE(app, argc, argv);
  if (*out_opt) overrides.out = out;
  if (*workers_opt) overrides.workers = workers;
  if (*seed_opt) overrides.seed = seed;

  try {
    if (*run) return execute(config_path, overrides, false);
    if (*cell) return execute(config_path, overrides, true);
    if (*check) {
      const auto results = perfhom::run_acceptance(std::cout, overrides.workers.value_or(1), only);
      int failed = 0;
      for (const auto& r : results) failed += r.passed ? 0 : 1;
      std::cout << (results.size() - failed) << "/" << results.size() << " criteria passed" << std::endl;
      return failed == 0 ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << perfhom::error_record(e).dump() << std::endl;
    return 2;
  }
  return 0;
}
