#include <cmath>
#include <random>

#include "doctest.h"
#include "rockrisk/pde1d.hpp"
#include "rockrisk/sampling.hpp"

using rockrisk::Grid1D;
using rockrisk::KklField;

namespace {

constexpr double kPi = 3.14159265358979323846;

/// Manufactured problem: a(x) = 1 + x/2, u(x) = sin(pi x), so
/// z = -(a u')' = a pi^2 sin(pi x) - (pi/2) cos(pi x).
Eigen::VectorXd manufactured_rhs(const Grid1D& grid) {
  const Eigen::VectorXd x = grid.nodes();
  Eigen::VectorXd z(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    z[i] = (1.0 + 0.5 * x[i]) * kPi * kPi * std::sin(kPi * x[i]) -
           0.5 * kPi * std::cos(kPi * x[i]);
  }
  return z;
}

Eigen::VectorXd manufactured_field(const Grid1D& grid) {
  Eigen::VectorXd a(grid.n_cells);
  for (int i = 0; i < grid.n_cells; ++i) {
    const double mid = (i + 0.5) * grid.h();
    a[i] = 1.0 + 0.5 * mid;
  }
  return a;
}

double max_error(const Grid1D& grid) {
  const Eigen::VectorXd u = rockrisk::solve_forward_midpoints(
      grid, manufactured_field(grid), manufactured_rhs(grid));
  const Eigen::VectorXd x = grid.nodes();
  double err = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    err = std::max(err, std::abs(u[i] - std::sin(kPi * x[i])));
  }
  return err;
}

}  // namespace

TEST_CASE("grid geometry") {
  const Grid1D grid{4};
  CHECK(grid.h() == doctest::Approx(0.25));
  CHECK(grid.n_nodes() == 5);
  const Eigen::VectorXd w = grid.trapz_weights();
  CHECK(w[0] == doctest::Approx(0.125));
  CHECK(w[2] == doctest::Approx(0.25));
  CHECK(w.sum() == doctest::Approx(1.0));
}

TEST_CASE("KKL eigenvalues and field positivity") {
  const KklField field{0.4, 50};
  CHECK(field.lambda(1) == doctest::Approx(4.0 / (kPi * kPi)));
  CHECK(field.lambda(2) == doctest::Approx(4.0 / (9.0 * kPi * kPi)));
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  Eigen::VectorXd xi(50);
  for (int i = 0; i < 50; ++i) xi[i] = normal(rng);
  for (double x : {0.1, 0.5, 0.9}) {
    CHECK(field.value(x, xi) > 0.0);  // lognormal field
  }
  // xi = 0 gives the unit field.
  CHECK(field.value(0.3, Eigen::VectorXd::Zero(50)) == doctest::Approx(1.0));
}

TEST_CASE("forward solve reproduces a manufactured solution") {
  CHECK(max_error(Grid1D{64}) < 3e-4);
}

TEST_CASE("forward solve converges at second order") {
  const double e32 = max_error(Grid1D{32});
  const double e64 = max_error(Grid1D{64});
  const double e128 = max_error(Grid1D{128});
  CHECK(e32 / e64 == doctest::Approx(4.0).epsilon(0.12));
  CHECK(e64 / e128 == doctest::Approx(4.0).epsilon(0.12));
}

TEST_CASE("objective is half the squared trapezoidal misfit") {
  const Grid1D grid{32};
  const KklField field{0.4, 50};
  const Eigen::VectorXd xi = Eigen::VectorXd::Zero(50);
  // z = 0 gives u = 0 and j = 1/2 trapz(1) = 1/2.
  CHECK(rockrisk::objective_j(grid, field, xi,
                              Eigen::VectorXd::Zero(grid.n_nodes())) ==
        doctest::Approx(0.5));
}

TEST_CASE("adjoint gradient matches central differences") {
  const Grid1D grid{48};
  const KklField field{0.4, 50};
  std::mt19937_64 rng(17);
  std::normal_distribution<double> normal;
  const Eigen::VectorXd w = grid.trapz_weights();
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::VectorXd xi(50), z(grid.n_nodes()), dz(grid.n_nodes());
    for (int i = 0; i < 50; ++i) xi[i] = normal(rng);
    for (int i = 0; i < grid.n_nodes(); ++i) {
      z[i] = normal(rng);
      dz[i] = normal(rng);
    }
    const Eigen::VectorXd p = rockrisk::gradient_j(grid, field, xi, z);
    // The representer pairs with directions through the trapezoidal product.
    const double directional = p.cwiseProduct(w).dot(dz);
    const double eps = 1e-5;
    const double fd = (rockrisk::objective_j(grid, field, xi, z + eps * dz) -
                       rockrisk::objective_j(grid, field, xi, z - eps * dz)) /
                      (2.0 * eps);
    CHECK(directional == doctest::Approx(fd).epsilon(1e-7));
  }
}
