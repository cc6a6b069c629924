#pragma once

#include <Eigen/Dense>
#include <string>

#include "rockrisk/analysis.hpp"
#include "rockrisk/config.hpp"
#include "rockrisk/nqe.hpp"
#include "rockrisk/rockafellian.hpp"

namespace rockrisk {

NqeConfig make_nqe_config(const ExperimentConfig& cfg, double beta);
RockConfig make_rock_config(const ExperimentConfig& cfg, double theta,
                            BoundMode mode, double l1_scale = 1.0);

/// Maps a corruption level to the scenario density: 0 -> TruncExp,
/// 1 -> Algebraic, otherwise the convex mixture with weight 1-c on TruncExp.
DensitySpec density_for_corruption(const ExperimentConfig& cfg, double c);

/// GQ-discretized density as a scenario set (weights normalized to sum 1);
/// `mass_out` receives the unnormalized discrete mass (the l1 scale).
ScenarioSet density_scenarios(const Quadrature& gq, const DensitySpec& density,
                              double& mass_out);

void run_example1(const ExperimentConfig& cfg);
void run_example2(const ExperimentConfig& cfg);
void run_cdf_study(const ExperimentConfig& cfg);

/// Dispatches on cfg.experiment; returns a process exit status (0 success,
/// 1 runtime failure).
int run_experiment(const ExperimentConfig& cfg);

/// Reads the `value` column of a nodal CSV written by write_nodal_csv.
Eigen::VectorXd read_nodal_values_csv(const std::string& path);

}  // namespace rockrisk
