#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <vector>

#include "rockrisk/pde1d.hpp"
#include "rockrisk/pde2d.hpp"
#include "rockrisk/sampling.hpp"

namespace rockrisk {

/// Per-scenario objective/gradient oracle: J_i(z) and its Euclidean gradient
/// with respect to the nodal control coefficients, plus the L2 mass operator
/// used by the regularization term. Implementations must be safe to call
/// from multiple threads on distinct scenario indices.
class ScenarioProblem {
 public:
  virtual ~ScenarioProblem() = default;
  virtual int control_dim() const = 0;
  virtual int scenario_count() const = 0;
  /// Fills J[i] for every scenario; when `grads` is non-null, also fills one
  /// gradient vector per scenario.
  virtual void evaluate(const Eigen::VectorXd& z, Eigen::VectorXd& values,
                        std::vector<Eigen::VectorXd>* grads) const = 0;
  /// Applies the discrete L2 mass operator (Riesz map) to a nodal vector.
  virtual Eigen::VectorXd mass_apply(const Eigen::VectorXd& z) const = 0;
};

/// Example 1 testbed: random-diffusion BVP on (0,1) with trapezoidal L2
/// geometry. Field values at cell midpoints are precomputed per scenario.
class Pde1dProblem : public ScenarioProblem {
 public:
  Pde1dProblem(Grid1D grid, KklField field, const ScenarioSet& scenarios,
               int workers = 1);

  int control_dim() const override { return grid_.n_nodes(); }
  int scenario_count() const override {
    return static_cast<int>(field_midpoints_.size());
  }
  void evaluate(const Eigen::VectorXd& z, Eigen::VectorXd& values,
                std::vector<Eigen::VectorXd>* grads) const override;
  Eigen::VectorXd mass_apply(const Eigen::VectorXd& z) const override;

  const Grid1D& grid() const { return grid_; }

 private:
  Grid1D grid_;
  KklField field_;
  std::vector<Eigen::VectorXd> field_midpoints_;
  Eigen::VectorXd trapz_;
  int workers_;
};

/// Example 2 testbed: advection-diffusion BVP on the unit disk; one cached
/// factorization pair per scenario value of xi.
class Pde2dProblem : public ScenarioProblem {
 public:
  Pde2dProblem(const DiskFem& fem, const AdvectionField& adv,
               std::vector<double> xis, Eigen::VectorXd forcing,
               int workers = 1);

  int control_dim() const override { return fem_->dof_count(); }
  int scenario_count() const override {
    return static_cast<int>(solvers_.size());
  }
  void evaluate(const Eigen::VectorXd& z, Eigen::VectorXd& values,
                std::vector<Eigen::VectorXd>* grads) const override;
  Eigen::VectorXd mass_apply(const Eigen::VectorXd& z) const override;

  const DiskFem& fem() const { return *fem_; }
  const ScenarioSolver2d& solver(int i) const { return *solvers_[i]; }

 private:
  const DiskFem* fem_;
  std::vector<std::unique_ptr<ScenarioSolver2d>> solvers_;
  Eigen::VectorXd forcing_;
  int workers_;
};

/// Scalar test problem J_i(z) = 1/2 (z - xi_i)^2 with identity mass.
class SyntheticProblem : public ScenarioProblem {
 public:
  explicit SyntheticProblem(std::vector<double> xis) : xis_(std::move(xis)) {}
  int control_dim() const override { return 1; }
  int scenario_count() const override { return static_cast<int>(xis_.size()); }
  void evaluate(const Eigen::VectorXd& z, Eigen::VectorXd& values,
                std::vector<Eigen::VectorXd>* grads) const override;
  Eigen::VectorXd mass_apply(const Eigen::VectorXd& z) const override {
    return z;
  }

 private:
  std::vector<double> xis_;
};

/// Runs fn(i) for i in [0, n) on up to `workers` threads; callers store
/// per-index results so reductions stay in fixed order.
void parallel_for(int n, int workers, const std::function<void(int)>& fn);

}  // namespace rockrisk
