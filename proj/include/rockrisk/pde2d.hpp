#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <array>
#include <memory>
#include <string>
#include <vector>

namespace rockrisk {

/// Five-patch transfinite quad mesh of the unit disk: a central square plus
/// four boundary-following patches, uniformly refined. Boundary nodes lie on
/// the unit circle.
struct DiskMesh {
  int refinement = 0;
  Eigen::MatrixX2d nodes;
  std::vector<std::array<int, 4>> quads;  // counterclockwise connectivity
  std::vector<int> boundary_nodes;
  std::vector<bool> is_boundary;
  int dof_count() const { return static_cast<int>(nodes.rows()); }
};

DiskMesh build_mesh(int refinement);

/// Spatially constant, divergence-free advection velocity
///   v(xi) = (xi cos(xi pi/v_max - pi/2), xi sin(xi pi/v_max - pi/2)),
/// so that |v(xi)| = xi.
struct AdvectionField {
  double v_max = 20.0;
  Eigen::Vector2d velocity(double xi) const;
};

/// Q1 Galerkin discretization of -Lap(u) + v.grad(u) = f + z on the disk
/// with homogeneous Dirichlet data. The stiffness, advection, and mass
/// matrices are assembled once per mesh and reused across xi.
class DiskFem {
 public:
  explicit DiskFem(DiskMesh mesh);

  const DiskMesh& mesh() const { return mesh_; }
  int dof_count() const { return mesh_.dof_count(); }
  int interior_count() const { return static_cast<int>(interior_.size()); }
  const std::vector<int>& interior_dofs() const { return interior_; }

  const Eigen::SparseMatrix<double>& stiffness() const { return stiffness_; }
  const Eigen::SparseMatrix<double>& advection_x() const { return adv_x_; }
  const Eigen::SparseMatrix<double>& advection_y() const { return adv_y_; }
  const Eigen::SparseMatrix<double>& mass() const { return mass_; }

  /// Interior block of A + v_x(xi) C_x + v_y(xi) C_y (Dirichlet rows and
  /// columns eliminated). Requires 0 <= xi <= v_max of `adv`.
  Eigen::SparseMatrix<double> system_matrix(const AdvectionField& adv,
                                            double xi) const;

  Eigen::VectorXd restrict_interior(const Eigen::VectorXd& full) const;
  Eigen::VectorXd extend_with_zeros(const Eigen::VectorXd& interior) const;

 private:
  DiskMesh mesh_;
  std::vector<int> interior_;        // interior dof indices
  std::vector<int> full_to_interior_;  // -1 for boundary dofs
  Eigen::SparseMatrix<double> stiffness_, adv_x_, adv_y_, mass_;
};

/// Per-xi factorizations of the system matrix and its transpose; reused for
/// every forward/adjoint solve at that scenario.
class ScenarioSolver2d {
 public:
  ScenarioSolver2d(const DiskFem& fem, const AdvectionField& adv, double xi);

  double xi() const { return xi_; }

  /// u with K(xi) u = M (f + z) on interior dofs, zero on the boundary.
  Eigen::VectorXd solve_forward(const Eigen::VectorXd& z,
                                const Eigen::VectorXd& f) const;

  /// j = 1/2 (u - u_star)^T M (u - u_star) with u_star = 1; the gradient is
  /// the FEM dual vector M p with K^T p = M (u - u_star) on interior dofs.
  double objective(const Eigen::VectorXd& z, const Eigen::VectorXd& f) const;
  double objective_and_gradient(const Eigen::VectorXd& z,
                                const Eigen::VectorXd& f,
                                Eigen::VectorXd& grad) const;

 private:
  const DiskFem* fem_;
  double xi_;
  Eigen::SparseMatrix<double> k_, kt_;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu_, lu_t_;
};

/// Free-function forms of the per-scenario operations.
Eigen::VectorXd solve_forward(const DiskFem& fem, const AdvectionField& adv,
                              double xi, const Eigen::VectorXd& z,
                              const Eigen::VectorXd& f);
double objective_and_gradient(const DiskFem& fem, const AdvectionField& adv,
                              double xi, const Eigen::VectorXd& z,
                              Eigen::VectorXd& grad);

/// Nodal field dump: x, y, value rows.
void write_nodal_csv(const DiskMesh& mesh, const Eigen::VectorXd& values,
                     const std::string& path);

}  // namespace rockrisk
