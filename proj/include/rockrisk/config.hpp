#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace rockrisk {

enum class ExperimentKind { Example1, Example2, CdfStudy };

/// Raised on malformed or invariant-violating configuration; the message
/// names the offending field.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Validated experiment parameters. Plain key=value sections on disk; see
/// configs/ for annotated examples.
struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::Example1;

  // sweep
  std::vector<double> beta_list{0.5};
  std::vector<double> corruption_levels{0.05};
  std::vector<double> theta_list{0.1};

  // problem
  int n_samples = 500;     // SAA size (1D)
  int n_quadrature = 15;   // GQ nodes (2D)
  int grid_cells = 64;     // 1D cells
  int refinement = 4;      // 2D mesh refinement
  int kkl_terms = 50;
  double kkl_sigma = 0.4;
  double corruption_factor = 5.0;
  double alpha = 1e-5;
  double delta = 1e-3;
  double v_max = 20.0;
  double density_k = 0.25;
  double density_a = 5.0;
  std::uint64_t seed = 1;

  // solver
  double gamma_tol = 1e-4;
  double grad_tol = 1e-6;
  int lbfgs_history = 9;
  int lbfgs_max_iters = 500;
  int max_outer = 100;
  double t_tol = 1e-3;
  int max_adi = 50;

  // cdf study
  int n_sobol = 4096;
  bool cdf_surrogate = false;
  std::vector<std::string> cdf_controls;  // nodal CSV dumps
  std::vector<std::string> cdf_labels;

  // output
  std::string output_dir = "out";
  int workers = 1;
};

/// Parses section.key = value entries; '#' and ';' start comments.
std::map<std::string, std::string> parse_config_file(const std::string& path);

/// Loads and validates a config file. Throws ConfigError with a field-level
/// message on any invariant violation.
ExperimentConfig load_experiment_config(const std::string& path);

/// Validates an already-populated config (same checks as the loader).
void validate(const ExperimentConfig& cfg);

/// Switches sweep and discretization parameters to the full-scale settings.
void apply_full_scale(ExperimentConfig& cfg);

}  // namespace rockrisk
