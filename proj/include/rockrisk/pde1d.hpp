#pragma once

#include <Eigen/Dense>

namespace rockrisk {

/// Uniform partition of [0,1] with n_cells cells (n_cells+1 nodes).
struct Grid1D {
  int n_cells = 128;
  double h() const { return 1.0 / n_cells; }
  int n_nodes() const { return n_cells + 1; }
  Eigen::VectorXd nodes() const;
  /// Composite trapezoidal weights over all nodes.
  Eigen::VectorXd trapz_weights() const;
};

/// Lognormal diffusion field from a truncated Kosambi-Karhunen-Loeve
/// expansion of rescaled Brownian motion:
///   a(x, xi) = exp(sigma * sum_k sqrt(lambda_k) sin(x/sqrt(lambda_k)) xi_k),
///   lambda_k = 4 / ((2k-1)^2 pi^2).
struct KklField {
  double sigma = 0.4;
  int d = 50;
  double lambda(int k) const;  // k is 1-based
  double value(double x, const Eigen::VectorXd& xi) const;
  /// Field values at the cell midpoints of `grid` (used by the conservative
  /// flux discretization).
  Eigen::VectorXd midpoint_values(const Grid1D& grid,
                                  const Eigen::VectorXd& xi) const;
};

/// Solves -(a u')' = z on (0,1), u(0)=u(1)=0, with conservative second-order
/// finite differences (field at cell midpoints) and the Thomas algorithm.
/// `z` holds nodal values; the returned state has zeros at both boundary
/// nodes.
Eigen::VectorXd solve_forward(const Grid1D& grid, const KklField& field,
                              const Eigen::VectorXd& xi,
                              const Eigen::VectorXd& z);

/// Variant taking precomputed midpoint field values (one per cell).
Eigen::VectorXd solve_forward_midpoints(const Grid1D& grid,
                                        const Eigen::VectorXd& a_mid,
                                        const Eigen::VectorXd& z);

/// j(z) = 1/2 * trapz((u - u_star)^2) with target u_star = 1.
double objective_j(const Grid1D& grid, const KklField& field,
                   const Eigen::VectorXd& xi, const Eigen::VectorXd& z);

/// L2 gradient representation of j with respect to z: the adjoint state p
/// solving A p = (u - u_star) at interior nodes (A is self-adjoint), so
/// that j(z + eps*dz) - j(z) = eps * <p, dz>_trapz + O(eps^2). Boundary
/// entries are zero.
Eigen::VectorXd gradient_j(const Grid1D& grid, const KklField& field,
                           const Eigen::VectorXd& xi,
                           const Eigen::VectorXd& z);

Eigen::VectorXd gradient_j_midpoints(const Grid1D& grid,
                                     const Eigen::VectorXd& a_mid,
                                     const Eigen::VectorXd& z);

}  // namespace rockrisk
