#include "rockrisk/nqe.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace rockrisk {

namespace {

void check_weights(const Eigen::VectorXd& w, int n) {
  if (w.size() != n) {
    throw std::invalid_argument("nqe: weight count mismatch");
  }
  if (w.minCoeff() < -1e-12 || std::abs(w.sum() - 1.0) > 1e-9) {
    throw std::invalid_argument("nqe: scenario weights must form a simplex");
  }
}

double weighted_median(const Eigen::VectorXd& values,
                       const Eigen::VectorXd& weights) {
  std::vector<int> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return values[a] < values[b]; });
  double acc = 0.0;
  for (int i : order) {
    acc += weights[i];
    if (acc >= 0.5) return values[i];
  }
  return values[order.back()];
}

WeightedOutcomes to_outcomes(const Eigen::VectorXd& values,
                             const Eigen::VectorXd& weights) {
  WeightedOutcomes o;
  o.values.assign(values.data(), values.data() + values.size());
  o.weights.resize(weights.size());
  // Clamp round-off negatives and renormalize exactly to machine precision.
  double sum = 0.0;
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    o.weights[i] = std::max(weights[i], 0.0);
    sum += o.weights[i];
  }
  for (double& w : o.weights) w /= sum;
  return o;
}

}  // namespace

double saa_objective(const ScenarioProblem& problem,
                     const Eigen::VectorXd& weights, const Eigen::VectorXd& z,
                     double gamma, const NqeConfig& cfg) {
  check_weights(weights, problem.scenario_count());
  Eigen::VectorXd values;
  problem.evaluate(z, values, nullptr);
  const SmoothingParams sp = cfg.smoothing();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    acc += weights[i] * plus_smooth(values[i] - gamma, sp);
  }
  return gamma + cfg.risk().kappa() * acc +
         0.5 * cfg.alpha * z.dot(problem.mass_apply(z));
}

NqeResult nqe_solve(const ScenarioProblem& problem,
                    const Eigen::VectorXd& weights, const NqeConfig& cfg,
                    Eigen::VectorXd z0, std::optional<double> gamma0) {
  const int n = problem.scenario_count();
  check_weights(weights, n);
  if (!z0.allFinite()) {
    throw std::invalid_argument("nqe_solve: non-finite initial control");
  }
  const SmoothingParams sp = cfg.smoothing();
  const double kappa = cfg.risk().kappa();

  NqeResult res;
  Eigen::VectorXd values;
  problem.evaluate(z0, values, nullptr);
  double gamma = gamma0 ? *gamma0 : weighted_median(values, weights);

  Eigen::VectorXd z = std::move(z0);
  std::vector<Eigen::VectorXd> grads;

  for (int outer = 1; outer <= cfg.max_outer; ++outer) {
    // z-step at fixed gamma: kappa sum w_i sp(J_i - gamma) + (alpha/2)|z|^2.
    auto objective = [&](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
      problem.evaluate(x, values, &grads);
      double val = 0.0;
      g = cfg.alpha * problem.mass_apply(x);
      for (int i = 0; i < n; ++i) {
        val += weights[i] * plus_smooth(values[i] - gamma, sp);
        const double a =
            weights[i] * plus_smooth_derivative(values[i] - gamma, sp);
        if (a != 0.0) g += (kappa * a) * grads[i];
      }
      return kappa * val + 0.5 * cfg.alpha * x.dot(problem.mass_apply(x));
    };
    const LbfgsResult zstep = lbfgs_minimize(objective, z, cfg.lbfgs);
    z = zstep.x;

    // gamma-step at fixed z.
    problem.evaluate(z, values, nullptr);
    const WeightedOutcomes outcomes = to_outcomes(values, weights);
    const GammaSolve gs =
        solve_gamma(outcomes, cfg.risk(), sp, cfg.gamma_residual_tol);

    const double obj = gs.gamma +
                       kappa * [&] {
                         double acc = 0.0;
                         for (int i = 0; i < n; ++i) {
                           acc += weights[i] *
                                  plus_smooth(values[i] - gs.gamma, sp);
                         }
                         return acc;
                       }() +
                       0.5 * cfg.alpha * z.dot(problem.mass_apply(z));
    res.trace.push_back({outer, gs.gamma, obj, gs.residual});
    res.outer_iters = outer;

    const double gamma_shift = std::abs(gs.gamma - gamma);
    gamma = gs.gamma;
    res.gamma = gamma;
    res.objective = obj;
    res.residual = gs.residual;
    if (gamma_shift < cfg.gamma_tol) {
      res.converged = true;
      break;
    }
  }
  res.z = std::move(z);
  res.scenario_values = std::move(values);
  return res;
}

void write_nqe_trace_csv(const NqeResult& result, const std::string& path) {
  std::ofstream f(path);
  if (!f) {
    throw std::runtime_error("write_nqe_trace_csv: cannot open " + path);
  }
  f << "iter,gamma,objective,residual\n";
  f.precision(17);
  for (const auto& p : result.trace) {
    f << p.iter << ',' << p.gamma << ',' << p.objective << ',' << p.residual
      << '\n';
  }
}

}  // namespace rockrisk
