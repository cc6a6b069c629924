#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "rockrisk/nqe.hpp"
#include "rockrisk/sampling.hpp"

namespace rockrisk {

/// Box-bound policy for the probability-mass perturbation t. Bounds are
/// expressed per unit of base probability mass p_i (for equal 1/N weights,
/// Tight is the classical -1/N <= t_i <= 1/N).
enum class BoundMode {
  Tight,    // -p_i <= t_i <= p_i
  Full,     // -p_i <= t_i <= 1 - p_i
  Density,  // pointwise density bound; equals Tight in mass coordinates
};

struct RockConfig {
  double theta = 0.1;        // l1 penalty weight
  double t_tol = 1e-3;       // l1 distance between successive t iterates
  BoundMode bound_mode = BoundMode::Tight;
  int max_adi = 50;
  double deletion_tol = 1e-10;  // p_i + t_i below this counts as deleted
  /// Scale on the l1 penalty translating probability-mass perturbations back
  /// to the native perturbation variable (quadrature-weighted density modes
  /// set this to the discrete mass of the unperturbed density; 1 otherwise).
  double l1_scale = 1.0;
};

struct AdiTracePoint {
  int iter;
  double phi;
  double t_step_l1;
  int corrupted_deleted;
  int clean_deleted;
};

struct RockResult {
  Eigen::VectorXd z;
  Eigen::VectorXd t;  // probability-mass perturbation, sum(t) = 0
  double gamma = 0.0;
  double phi = 0.0;
  int corrupted_deleted = 0;
  int clean_deleted = 0;
  int adi_iters = 0;
  bool converged = false;
  bool nqe_converged = true;
  std::vector<AdiTracePoint> trace;
};

/// Alternating-direction heuristic on the Rockafellian: NQE over z with
/// weights p + t, then the exact perturbation LP over t at the frozen
/// (z*, gamma*), repeated until the l1 distance between successive t values
/// falls below t_tol.
RockResult adi_minimize(const ScenarioProblem& problem,
                        const ScenarioSet& scenarios, const NqeConfig& nqe_cfg,
                        const RockConfig& rock_cfg, const Eigen::VectorXd& z0);

/// Phi(z, t) = min_gamma [gamma + kappa sum (p_i+t_i) sp(J_i(z)-gamma)]
///             + theta * l1_scale * sum |t_i|,
/// or +infinity when p + t leaves the probability simplex.
double phi_value(const ScenarioProblem& problem, const ScenarioSet& scenarios,
                 const Eigen::VectorXd& z, const Eigen::VectorXd& t,
                 const NqeConfig& nqe_cfg, const RockConfig& rock_cfg);

/// Final perturbation dump: index, t_i, p_i + t_i, corrupted flag.
void write_perturbation_csv(const ScenarioSet& scenarios,
                            const Eigen::VectorXd& t, const std::string& path);

/// ADI trace dump: iter, phi, l1 step, deletion counts.
void write_adi_trace_csv(const RockResult& result, const std::string& path);

}  // namespace rockrisk
