#pragma once

#include <vector>

#include "rockrisk/smoothing.hpp"

namespace rockrisk {

/// CVaR risk level beta in [0,1) with kappa = 1/(1-beta).
struct RiskSpec {
  double beta = 0.5;
  double kappa() const { return 1.0 / (1.0 - beta); }
};

/// Realizations of the random objective with probability masses.
/// Weights must be nonnegative and sum to 1 (within 1e-10).
struct WeightedOutcomes {
  std::vector<double> values;
  std::vector<double> weights;
};

/// Throws std::invalid_argument if the outcome invariants are violated.
void validate(const WeightedOutcomes& o);

/// gamma + kappa * sum_i w_i * (J_i - gamma)_{+,delta}.
double cvar_smoothed(const WeightedOutcomes& o, const RiskSpec& r, double gamma,
                     const SmoothingParams& p);

struct ExactCvar {
  double cvar;
  double gamma;  // a minimizing anchor (the beta-quantile)
};

/// Nonsmooth CVaR by minimizing gamma + kappa*sum w_i (J_i-gamma)_+ over the
/// piecewise-linear breakpoints (sorted outcome values).
ExactCvar cvar_exact(const WeightedOutcomes& o, const RiskSpec& r);

struct GammaSolve {
  double gamma;
  double residual;   // |1 - kappa * sum w_i A_delta(J_i - gamma)|
  bool degenerate;   // beta == 0: no finite stationary point, gamma = min J
};

/// Stationary anchor of the smoothed CVaR: bisection on the strictly
/// increasing residual gamma -> 1 - kappa * sum w_i A_delta(J_i - gamma).
/// The bracket starts at [min J, max J] and expands geometrically until the
/// residual changes sign.
GammaSolve solve_gamma(const WeightedOutcomes& o, const RiskSpec& r,
                       const SmoothingParams& p, double tol = 1e-10);

}  // namespace rockrisk
