#include "rockrisk/pde1d.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rockrisk {

namespace {

/// Thomas algorithm for a tridiagonal system; diag/sub/super of length n
/// (sub[0] and super[n-1] unused).
Eigen::VectorXd thomas_solve(const Eigen::VectorXd& sub,
                             const Eigen::VectorXd& diag,
                             const Eigen::VectorXd& super,
                             const Eigen::VectorXd& rhs) {
  const Eigen::Index n = diag.size();
  Eigen::VectorXd c(n), d(n), x(n);
  c[0] = super[0] / diag[0];
  d[0] = rhs[0] / diag[0];
  for (Eigen::Index i = 1; i < n; ++i) {
    const double m = diag[i] - sub[i] * c[i - 1];
    c[i] = super[i] / m;
    d[i] = (rhs[i] - sub[i] * d[i - 1]) / m;
  }
  x[n - 1] = d[n - 1];
  for (Eigen::Index i = n - 2; i >= 0; --i) {
    x[i] = d[i] - c[i] * x[i + 1];
  }
  return x;
}

/// Solves the interior tridiagonal operator A y = rhs_interior and embeds the
/// result into a full nodal vector with zero boundary values.
Eigen::VectorXd interior_solve(const Grid1D& grid, const Eigen::VectorXd& a_mid,
                               const Eigen::VectorXd& rhs_interior) {
  const int m = grid.n_cells - 1;  // interior unknowns
  const double inv_h2 = 1.0 / (grid.h() * grid.h());
  Eigen::VectorXd sub(m), diag(m), super(m);
  for (int i = 0; i < m; ++i) {
    // Node i+1 sits between cell midpoints i and i+1.
    diag[i] = (a_mid[i] + a_mid[i + 1]) * inv_h2;
    sub[i] = i > 0 ? -a_mid[i] * inv_h2 : 0.0;
    super[i] = i < m - 1 ? -a_mid[i + 1] * inv_h2 : 0.0;
  }
  const Eigen::VectorXd y = thomas_solve(sub, diag, super, rhs_interior);
  Eigen::VectorXd full = Eigen::VectorXd::Zero(grid.n_nodes());
  full.segment(1, m) = y;
  return full;
}

}  // namespace

Eigen::VectorXd Grid1D::nodes() const {
  Eigen::VectorXd x(n_nodes());
  for (int i = 0; i <= n_cells; ++i) {
    x[i] = static_cast<double>(i) / n_cells;
  }
  return x;
}

Eigen::VectorXd Grid1D::trapz_weights() const {
  Eigen::VectorXd w = Eigen::VectorXd::Constant(n_nodes(), h());
  w[0] *= 0.5;
  w[n_cells] *= 0.5;
  return w;
}

double KklField::lambda(int k) const {
  const double q = (2.0 * k - 1.0) * std::numbers::pi;
  return 4.0 / (q * q);
}

double KklField::value(double x, const Eigen::VectorXd& xi) const {
  if (xi.size() != d) {
    throw std::invalid_argument("KklField: xi dimension mismatch");
  }
  double arg = 0.0;
  for (int k = 1; k <= d; ++k) {
    const double sq = std::sqrt(lambda(k));
    arg += sq * std::sin(x / sq) * xi[k - 1];
  }
  const double a = std::exp(sigma * arg);
  if (!std::isfinite(a)) {
    throw std::runtime_error("KklField: non-finite field value");
  }
  return a;
}

Eigen::VectorXd KklField::midpoint_values(const Grid1D& grid,
                                          const Eigen::VectorXd& xi) const {
  Eigen::VectorXd a(grid.n_cells);
  for (int c = 0; c < grid.n_cells; ++c) {
    a[c] = value((c + 0.5) * grid.h(), xi);
  }
  return a;
}

Eigen::VectorXd solve_forward_midpoints(const Grid1D& grid,
                                        const Eigen::VectorXd& a_mid,
                                        const Eigen::VectorXd& z) {
  if (z.size() != grid.n_nodes()) {
    throw std::invalid_argument("solve_forward: control size mismatch");
  }
  return interior_solve(grid, a_mid, z.segment(1, grid.n_cells - 1));
}

Eigen::VectorXd solve_forward(const Grid1D& grid, const KklField& field,
                              const Eigen::VectorXd& xi,
                              const Eigen::VectorXd& z) {
  return solve_forward_midpoints(grid, field.midpoint_values(grid, xi), z);
}

double objective_j(const Grid1D& grid, const KklField& field,
                   const Eigen::VectorXd& xi, const Eigen::VectorXd& z) {
  const Eigen::VectorXd u = solve_forward(grid, field, xi, z);
  const Eigen::VectorXd w = grid.trapz_weights();
  double acc = 0.0;
  for (int i = 0; i < grid.n_nodes(); ++i) {
    const double e = u[i] - 1.0;
    acc += w[i] * e * e;
  }
  return 0.5 * acc;
}

Eigen::VectorXd gradient_j_midpoints(const Grid1D& grid,
                                     const Eigen::VectorXd& a_mid,
                                     const Eigen::VectorXd& z) {
  const Eigen::VectorXd u = solve_forward_midpoints(grid, a_mid, z);
  const Eigen::VectorXd rhs =
      (u.segment(1, grid.n_cells - 1).array() - 1.0).matrix();
  return interior_solve(grid, a_mid, rhs);
}

Eigen::VectorXd gradient_j(const Grid1D& grid, const KklField& field,
                           const Eigen::VectorXd& xi,
                           const Eigen::VectorXd& z) {
  return gradient_j_midpoints(grid, field.midpoint_values(grid, xi), z);
}

}  // namespace rockrisk
