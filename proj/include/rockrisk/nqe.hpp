#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "rockrisk/optim.hpp"
#include "rockrisk/problem.hpp"
#include "rockrisk/risk.hpp"

namespace rockrisk {

struct NqeConfig {
  double beta = 0.5;
  double delta = 1e-3;       // mollification level
  double alpha = 1e-5;       // control regularization weight
  double gamma_tol = 1e-4;   // stop on |gamma_{k+1} - gamma_k|
  int max_outer = 100;
  LbfgsOptions lbfgs;
  double gamma_residual_tol = 1e-10;  // bisection tolerance in solve_gamma

  RiskSpec risk() const { return {beta}; }
  SmoothingParams smoothing() const { return {delta}; }
};

struct NqeTracePoint {
  int iter;
  double gamma;
  double objective;
  double residual;
};

struct NqeResult {
  Eigen::VectorXd z;
  double gamma = 0.0;
  double objective = 0.0;          // gamma + kappa sum w*sp + (alpha/2)|z|^2
  int outer_iters = 0;
  double residual = 0.0;           // |1 - kappa sum w_i A_delta(J_i - gamma)|
  bool converged = false;
  Eigen::VectorXd scenario_values;  // J_i at the final control
  std::vector<NqeTracePoint> trace;
};

/// Alternating coordinate descent: quasi-Newton in the control z at fixed
/// gamma, then the stationary gamma at fixed z, until successive gamma
/// values differ by less than gamma_tol. The z-subproblem warm-starts from
/// the previous iterate; gamma starts from the weighted median of the
/// initial scenario values unless gamma0 is given.
NqeResult nqe_solve(const ScenarioProblem& problem,
                    const Eigen::VectorXd& weights, const NqeConfig& cfg,
                    Eigen::VectorXd z0,
                    std::optional<double> gamma0 = std::nullopt);

/// gamma + kappa sum_i w_i (J_i(z)-gamma)_{+,delta} + (alpha/2) z^T M z.
double saa_objective(const ScenarioProblem& problem,
                     const Eigen::VectorXd& weights, const Eigen::VectorXd& z,
                     double gamma, const NqeConfig& cfg);

/// Iteration trace dump: iter, gamma, objective, residual.
void write_nqe_trace_csv(const NqeResult& result, const std::string& path);

}  // namespace rockrisk
