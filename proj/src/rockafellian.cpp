#include "rockrisk/rockafellian.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "rockrisk/optim.hpp"

namespace rockrisk {

namespace {

void bounds_for(const RockConfig& cfg, const Eigen::VectorXd& p,
                Eigen::VectorXd& lower, Eigen::VectorXd& upper) {
  switch (cfg.bound_mode) {
    case BoundMode::Tight:
    case BoundMode::Density:
      lower = -p;
      upper = p;
      return;
    case BoundMode::Full:
      lower = -p;
      upper = (1.0 - p.array()).matrix();
      return;
  }
  throw std::logic_error("unknown bound mode");
}

void count_deletions(const ScenarioSet& scenarios, const Eigen::VectorXd& t,
                     double tol, int& corrupted, int& clean) {
  corrupted = 0;
  clean = 0;
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    if (scenarios.weights[i] + t[i] <= tol) {
      (scenarios.corrupted[i] ? corrupted : clean) += 1;
    }
  }
}

}  // namespace

RockResult adi_minimize(const ScenarioProblem& problem,
                        const ScenarioSet& scenarios, const NqeConfig& nqe_cfg,
                        const RockConfig& rock_cfg,
                        const Eigen::VectorXd& z0) {
  validate(scenarios);
  const Eigen::VectorXd& p = scenarios.weights;
  const int n = problem.scenario_count();
  if (p.size() != n) {
    throw std::invalid_argument("adi_minimize: scenario count mismatch");
  }
  const double kappa = nqe_cfg.risk().kappa();
  const SmoothingParams sp = nqe_cfg.smoothing();

  Eigen::VectorXd lower, upper;
  bounds_for(rock_cfg, p, lower, upper);

  RockResult res;
  res.t = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd z = z0;
  std::optional<double> gamma_warm;

  for (int iter = 1; iter <= rock_cfg.max_adi; ++iter) {
    const NqeResult nqe =
        nqe_solve(problem, p + res.t, nqe_cfg, z, gamma_warm);
    z = nqe.z;
    gamma_warm = nqe.gamma;
    res.gamma = nqe.gamma;
    res.nqe_converged = res.nqe_converged && nqe.converged;
    res.adi_iters = iter;

    // LP over t at frozen (z*, gamma*): costs are the kappa-scaled smoothed
    // exceedances; working in probability-mass coordinates the masses are 1.
    PerturbationLp lp;
    lp.linear_cost.resize(n);
    for (int i = 0; i < n; ++i) {
      lp.linear_cost[i] =
          kappa * plus_smooth(nqe.scenario_values[i] - nqe.gamma, sp);
    }
    // The common mass factor scales linear and l1 terms alike, so the LP
    // argmin sees the bare theta; l1_scale only converts reported norms.
    lp.l1_weight = rock_cfg.theta;
    lp.mass_weights = Eigen::VectorXd::Ones(n);
    lp.lower = lower;
    lp.upper = upper;
    const LpSolution lp_sol = solve_perturbation_lp(lp);

    const double step = (lp_sol.t - res.t).lpNorm<1>() * rock_cfg.l1_scale;
    res.t = lp_sol.t;
    count_deletions(scenarios, res.t, rock_cfg.deletion_tol,
                    res.corrupted_deleted, res.clean_deleted);

    // Phi at the new (z, t); gamma re-solved for the perturbed weights.
    const WeightedOutcomes outcomes{
        {nqe.scenario_values.data(),
         nqe.scenario_values.data() + nqe.scenario_values.size()},
        std::vector<double>(n)};
    WeightedOutcomes perturbed = outcomes;
    for (int i = 0; i < n; ++i) perturbed.weights[i] = std::max(p[i] + res.t[i], 0.0);
    double wsum = 0.0;
    for (double w : perturbed.weights) wsum += w;
    for (double& w : perturbed.weights) w /= wsum;
    const GammaSolve gs = solve_gamma(perturbed, nqe_cfg.risk(), sp,
                                      nqe_cfg.gamma_residual_tol);
    res.phi = cvar_smoothed(perturbed, nqe_cfg.risk(), gs.gamma, sp) +
              rock_cfg.theta * rock_cfg.l1_scale * res.t.lpNorm<1>();

    res.trace.push_back(
        {iter, res.phi, step, res.corrupted_deleted, res.clean_deleted});
    if (step < rock_cfg.t_tol) {
      res.converged = true;
      break;
    }
  }
  res.z = std::move(z);
  return res;
}

double phi_value(const ScenarioProblem& problem, const ScenarioSet& scenarios,
                 const Eigen::VectorXd& z, const Eigen::VectorXd& t,
                 const NqeConfig& nqe_cfg, const RockConfig& rock_cfg) {
  validate(scenarios);
  const Eigen::VectorXd& p = scenarios.weights;
  const Eigen::VectorXd w = p + t;
  if (w.minCoeff() < -1e-9 || std::abs(t.sum()) > 1e-9) {
    return std::numeric_limits<double>::infinity();  // indicator semantics
  }
  Eigen::VectorXd values;
  problem.evaluate(z, values, nullptr);
  WeightedOutcomes outcomes;
  outcomes.values.assign(values.data(), values.data() + values.size());
  outcomes.weights.resize(w.size());
  double sum = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    outcomes.weights[i] = std::max(w[i], 0.0);
    sum += outcomes.weights[i];
  }
  for (double& wi : outcomes.weights) wi /= sum;
  const SmoothingParams sp = nqe_cfg.smoothing();
  const GammaSolve gs = solve_gamma(outcomes, nqe_cfg.risk(), sp,
                                    nqe_cfg.gamma_residual_tol);
  return cvar_smoothed(outcomes, nqe_cfg.risk(), gs.gamma, sp) +
         rock_cfg.theta * rock_cfg.l1_scale * t.lpNorm<1>();
}

void write_perturbation_csv(const ScenarioSet& scenarios,
                            const Eigen::VectorXd& t,
                            const std::string& path) {
  std::ofstream f(path);
  if (!f) {
    throw std::runtime_error("write_perturbation_csv: cannot open " + path);
  }
  f << "index,t,weight_perturbed,corrupted\n";
  f.precision(17);
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    f << i << ',' << t[i] << ',' << scenarios.weights[i] + t[i] << ','
      << (scenarios.corrupted[i] ? 1 : 0) << '\n';
  }
}

void write_adi_trace_csv(const RockResult& result, const std::string& path) {
  std::ofstream f(path);
  if (!f) {
    throw std::runtime_error("write_adi_trace_csv: cannot open " + path);
  }
  f << "iter,phi,t_step_l1,corrupted_deleted,clean_deleted\n";
  f.precision(17);
  for (const auto& p : result.trace) {
    f << p.iter << ',' << p.phi << ',' << p.t_step_l1 << ','
      << p.corrupted_deleted << ',' << p.clean_deleted << '\n';
  }
}

}  // namespace rockrisk
