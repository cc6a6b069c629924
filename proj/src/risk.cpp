#include "rockrisk/risk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "rockrisk/optim.hpp"

namespace rockrisk {

void validate(const WeightedOutcomes& o) {
  if (o.values.empty()) {
    throw std::invalid_argument("WeightedOutcomes: empty outcome list");
  }
  if (o.values.size() != o.weights.size()) {
    throw std::invalid_argument("WeightedOutcomes: length mismatch");
  }
  double sum = 0.0;
  for (double w : o.weights) {
    if (w < 0.0) {
      throw std::invalid_argument("WeightedOutcomes: negative weight");
    }
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-10) {
    throw std::invalid_argument("WeightedOutcomes: weights do not sum to 1");
  }
}

double cvar_smoothed(const WeightedOutcomes& o, const RiskSpec& r, double gamma,
                     const SmoothingParams& p) {
  validate(o);
  double acc = 0.0;
  for (std::size_t i = 0; i < o.values.size(); ++i) {
    acc += o.weights[i] * plus_smooth(o.values[i] - gamma, p);
  }
  return gamma + r.kappa() * acc;
}

ExactCvar cvar_exact(const WeightedOutcomes& o, const RiskSpec& r) {
  validate(o);
  if (r.beta >= 1.0) {
    throw std::invalid_argument("cvar_exact: beta must be < 1");
  }
  const double kappa = r.kappa();
  const std::size_t n = o.values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return o.values[a] < o.values[b];
  });

  // h(gamma) = gamma + kappa*sum w_i (J_i-gamma)_+ is convex piecewise linear
  // with breakpoints at the outcome values; scan them for the minimum.
  double best = std::numeric_limits<double>::infinity();
  double best_gamma = o.values[order.front()];
  for (std::size_t k = 0; k < n; ++k) {
    const double gamma = o.values[order[k]];
    double acc = 0.0;
    for (std::size_t j = k; j < n; ++j) {
      acc += o.weights[order[j]] * (o.values[order[j]] - gamma);
    }
    const double h = gamma + kappa * acc;
    if (h < best) {
      best = h;
      best_gamma = gamma;
    }
  }
  return {best, best_gamma};
}

GammaSolve solve_gamma(const WeightedOutcomes& o, const RiskSpec& r,
                       const SmoothingParams& p, double tol) {
  validate(o);
  const auto [min_it, max_it] =
      std::minmax_element(o.values.begin(), o.values.end());
  if (r.beta <= 0.0) {
    return {*min_it, 0.0, true};
  }
  const double kappa = r.kappa();
  auto residual = [&](double gamma) {
    double acc = 0.0;
    for (std::size_t i = 0; i < o.values.size(); ++i) {
      acc += o.weights[i] * plus_smooth_derivative(o.values[i] - gamma, p);
    }
    return 1.0 - kappa * acc;
  };

  double lo = *min_it;
  double hi = *max_it;
  double step = std::max(p.delta, 1e-12);
  int expansions = 0;
  while (residual(lo) > 0.0) {
    lo -= step;
    step *= 2.0;
    if (++expansions > 200) {
      throw std::runtime_error("solve_gamma: bracket expansion failed (low)");
    }
  }
  step = std::max(p.delta, 1e-12);
  expansions = 0;
  while (residual(hi) < 0.0) {
    hi += step;
    step *= 2.0;
    if (++expansions > 200) {
      throw std::runtime_error("solve_gamma: bracket expansion failed (high)");
    }
  }
  const double gamma = bisect_root(residual, lo, hi, tol);
  return {gamma, std::abs(residual(gamma)), false};
}

}  // namespace rockrisk
