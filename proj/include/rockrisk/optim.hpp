#pragma once

#include <Eigen/Dense>
#include <functional>

namespace rockrisk {

struct LbfgsOptions {
  int history = 9;
  double grad_tol = 1e-6;  // max-norm of the gradient
  int max_iters = 500;
  double wolfe_c1 = 1e-4;
  double wolfe_c2 = 0.9;
};

enum class LbfgsStatus { Converged, MaxIterations, LineSearchStalled };

struct LbfgsResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int iterations = 0;
  LbfgsStatus status = LbfgsStatus::Converged;
};

/// Objective callable: fills the gradient and returns the value.
using ValueGradFn =
    std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>;

/// Limited-memory BFGS with two-loop recursion and a strong-Wolfe line
/// search (initial step 1). Returns best-so-far with a LineSearchStalled
/// status if the search cannot make progress.
LbfgsResult lbfgs_minimize(const ValueGradFn& objective, Eigen::VectorXd x0,
                           const LbfgsOptions& opts = {});

/// The Rockafellian perturbation step:
///   min  sum_i c_i t_i + theta * sum_i a_i |t_i|
///   s.t. sum_i a_i t_i = 0,  lower_i <= t_i <= upper_i
/// with c_i >= 0, a_i > 0 and lower_i <= 0 <= upper_i (t = 0 is feasible).
struct PerturbationLp {
  Eigen::VectorXd linear_cost;   // c
  double l1_weight = 0.0;        // theta
  Eigen::VectorXd mass_weights;  // a
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
};

struct LpSolution {
  Eigen::VectorXd t;
  double objective;
};

/// Exact minimizer via a sorted dual-breakpoint scan over the single
/// coupling multiplier; at most one coordinate ends up fractional.
LpSolution solve_perturbation_lp(const PerturbationLp& lp);

/// Bisection for a monotone function with a sign change on [lo, hi].
/// Stops when |f(x)| <= tol or the interval reaches machine resolution.
double bisect_root(const std::function<double(double)>& f, double lo,
                   double hi, double tol);

}  // namespace rockrisk
