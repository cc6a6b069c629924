#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "rockrisk/config.hpp"
#include "rockrisk/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Risk-averse PDE-constrained control with Rockafellian "
               "scenario relaxation"};

  std::string config_path;
  std::string out_dir;
  long long seed = -1;
  int workers = 0;
  bool full_scale = false;

  app.add_option("-c,--config", config_path, "experiment config file")
      ->required();
  app.add_option("-o,--out", out_dir, "output directory (overrides config)");
  app.add_option("--seed", seed, "RNG seed (overrides config)");
  app.add_option("--workers", workers,
                 "worker threads (overrides config and ROCKRISK_WORKERS)");
  app.add_flag("--full-scale", full_scale,
               "switch to the full-scale sweep and discretization");

  CLI11_PARSE(app, argc, argv);

  rockrisk::ExperimentConfig cfg;
  try {
    cfg = rockrisk::load_experiment_config(config_path);
    if (full_scale) rockrisk::apply_full_scale(cfg);
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
    if (workers <= 0) {
      if (const char* env = std::getenv("ROCKRISK_WORKERS")) {
        workers = std::atoi(env);
      }
    }
    if (workers > 0) cfg.workers = workers;
    rockrisk::validate(cfg);
  } catch (const rockrisk::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  }

  return rockrisk::run_experiment(cfg);
}
