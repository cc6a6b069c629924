#include "rockrisk/problem.hpp"

#include <atomic>
#include <stdexcept>
#include <thread>

namespace rockrisk {

void parallel_for(int n, int workers, const std::function<void(int)>& fn) {
  workers = std::max(1, std::min(workers, n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
        fn(i);
      }
    });
  }
  for (auto& t : pool) t.join();
}

Pde1dProblem::Pde1dProblem(Grid1D grid, KklField field,
                           const ScenarioSet& scenarios, int workers)
    : grid_(grid), field_(field), workers_(workers) {
  validate(scenarios);
  if (scenarios.points.cols() != field_.d) {
    throw std::invalid_argument("Pde1dProblem: scenario dimension mismatch");
  }
  const int n = static_cast<int>(scenarios.points.rows());
  field_midpoints_.resize(n);
  parallel_for(n, workers_, [&](int i) {
    field_midpoints_[i] =
        field_.midpoint_values(grid_, scenarios.points.row(i).transpose());
  });
  trapz_ = grid_.trapz_weights();
}

void Pde1dProblem::evaluate(const Eigen::VectorXd& z, Eigen::VectorXd& values,
                            std::vector<Eigen::VectorXd>* grads) const {
  const int n = scenario_count();
  values.resize(n);
  if (grads) grads->resize(n);
  parallel_for(n, workers_, [&](int i) {
    const Eigen::VectorXd u =
        solve_forward_midpoints(grid_, field_midpoints_[i], z);
    const Eigen::ArrayXd e = u.array() - 1.0;
    values[i] = 0.5 * (trapz_.array() * e * e).sum();
    if (grads) {
      // Euclidean gradient = trapz mass times the L2 representer.
      const Eigen::VectorXd p =
          gradient_j_midpoints(grid_, field_midpoints_[i], z);
      (*grads)[i] = trapz_.cwiseProduct(p);
    }
  });
}

Eigen::VectorXd Pde1dProblem::mass_apply(const Eigen::VectorXd& z) const {
  return trapz_.cwiseProduct(z);
}

Pde2dProblem::Pde2dProblem(const DiskFem& fem, const AdvectionField& adv,
                           std::vector<double> xis, Eigen::VectorXd forcing,
                           int workers)
    : fem_(&fem), forcing_(std::move(forcing)), workers_(workers) {
  if (forcing_.size() == 0) {
    forcing_ = Eigen::VectorXd::Zero(fem.dof_count());
  }
  if (forcing_.size() != fem.dof_count()) {
    throw std::invalid_argument("Pde2dProblem: forcing size mismatch");
  }
  solvers_.resize(xis.size());
  parallel_for(static_cast<int>(xis.size()), workers_, [&](int i) {
    solvers_[i] = std::make_unique<ScenarioSolver2d>(fem, adv, xis[i]);
  });
}

void Pde2dProblem::evaluate(const Eigen::VectorXd& z, Eigen::VectorXd& values,
                            std::vector<Eigen::VectorXd>* grads) const {
  const int n = scenario_count();
  values.resize(n);
  if (grads) grads->resize(n);
  parallel_for(n, workers_, [&](int i) {
    if (grads) {
      values[i] = solvers_[i]->objective_and_gradient(z, forcing_, (*grads)[i]);
    } else {
      values[i] = solvers_[i]->objective(z, forcing_);
    }
  });
}

Eigen::VectorXd Pde2dProblem::mass_apply(const Eigen::VectorXd& z) const {
  return fem_->mass() * z;
}

void SyntheticProblem::evaluate(const Eigen::VectorXd& z,
                                Eigen::VectorXd& values,
                                std::vector<Eigen::VectorXd>* grads) const {
  const int n = scenario_count();
  values.resize(n);
  if (grads) grads->resize(n);
  for (int i = 0; i < n; ++i) {
    const double e = z[0] - xis_[i];
    values[i] = 0.5 * e * e;
    if (grads) {
      (*grads)[i] = Eigen::VectorXd::Constant(1, e);
    }
  }
}

}  // namespace rockrisk
