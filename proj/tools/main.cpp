#include <CLI11.hpp>

#include <chrono>
#include <exception>
#include <iostream>

#include "faultmimo/config.hpp"
#include "faultmimo/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Fault-tolerant massive MIMO channel estimation experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  int workers = 0;
  std::uint64_t seed = 0;
  int trials = 0;
  CLI::App* run = app.add_subcommand("run", "Run one experiment described by a config file");
  run->add_option("config", config_path, "Path to a key = value config file")->required();
  auto* out_opt = run->add_option("--out", out_dir, "Output directory for the CSV files");
  auto* workers_opt =
      run->add_option("--workers", workers, "OpenMP worker threads")->check(CLI::PositiveNumber);
  auto* seed_opt = run->add_option("--seed", seed, "Master RNG seed");
  auto* trials_opt =
      run->add_option("--trials", trials, "Monte-Carlo trials per cell")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    faultmimo::ExperimentConfig config = faultmimo::load_config(config_path);
    if (*out_opt) config.out_dir = out_dir;
    if (*workers_opt) config.workers = workers;
    if (*seed_opt) config.system.seed = seed;
    if (*trials_opt) config.trials = trials;
    config.validate();

    const auto t0 = std::chrono::steady_clock::now();
    const faultmimo::ExperimentOutput output = faultmimo::run_experiment(config);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const std::string name = faultmimo::to_string(config.experiment);
    for (const std::string& path : faultmimo::write_outputs(output, config.out_dir, name))
      std::cout << "wrote " << path << '\n';
    std::cout << name << ": " << output.rows.size() << " rows in " << secs << " s\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
