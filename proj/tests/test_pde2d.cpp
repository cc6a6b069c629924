#include <cmath>
#include <random>

#include "doctest.h"
#include "rockrisk/pde2d.hpp"

using rockrisk::AdvectionField;
using rockrisk::DiskFem;
using rockrisk::DiskMesh;

namespace {

constexpr double kPi = 3.14159265358979323846;

/// True L2 error against u(x,y) = 1 - x^2 - y^2 by 2x2 Gauss quadrature on
/// each element (bilinear geometry and solution interpolation).
double l2_error_paraboloid(const DiskMesh& mesh, const Eigen::VectorXd& uh) {
  const double g = 1.0 / std::sqrt(3.0);
  const double pts[2] = {-g, g};
  double err2 = 0.0;
  for (const auto& q : mesh.quads) {
    Eigen::Matrix<double, 4, 2> xy;
    Eigen::Vector4d uv;
    for (int a = 0; a < 4; ++a) {
      xy.row(a) = mesh.nodes.row(q[a]);
      uv[a] = uh[q[a]];
    }
    for (double s : pts) {
      for (double t : pts) {
        const Eigen::Vector4d N(0.25 * (1 - s) * (1 - t),
                                0.25 * (1 + s) * (1 - t),
                                0.25 * (1 + s) * (1 + t),
                                0.25 * (1 - s) * (1 + t));
        const Eigen::Vector4d dNds(-0.25 * (1 - t), 0.25 * (1 - t),
                                   0.25 * (1 + t), -0.25 * (1 + t));
        const Eigen::Vector4d dNdt(-0.25 * (1 - s), -0.25 * (1 + s),
                                   0.25 * (1 + s), 0.25 * (1 - s));
        Eigen::Matrix2d J;
        J.row(0) = dNds.transpose() * xy;
        J.row(1) = dNdt.transpose() * xy;
        const double det = J.determinant();
        const Eigen::Vector2d p = (N.transpose() * xy).transpose();
        const double exact = 1.0 - p.squaredNorm();
        const double diff = N.dot(uv) - exact;
        err2 += det * diff * diff;
      }
    }
  }
  return std::sqrt(err2);
}

double paraboloid_error(int refinement) {
  const DiskMesh mesh = rockrisk::build_mesh(refinement);
  const DiskFem fem(mesh);
  const AdvectionField adv;
  // -Lap(1 - x^2 - y^2) = 4, zero on the circle; xi = 0 kills advection.
  const Eigen::VectorXd z = Eigen::VectorXd::Constant(fem.dof_count(), 4.0);
  const Eigen::VectorXd f = Eigen::VectorXd::Zero(fem.dof_count());
  const Eigen::VectorXd u = rockrisk::solve_forward(fem, adv, 0.0, z, f);
  return l2_error_paraboloid(mesh, u);
}

}  // namespace

TEST_CASE("mesh node count and boundary placement") {
  for (int r : {0, 1, 3}) {
    const DiskMesh mesh = rockrisk::build_mesh(r);
    const int m = 1 << r;
    CHECK(mesh.dof_count() == 5 * m * m + 2 * m + 1);
    CHECK(static_cast<int>(mesh.quads.size()) == 5 * m * m);
    CHECK(static_cast<int>(mesh.boundary_nodes.size()) == 4 * m);
    for (int b : mesh.boundary_nodes) {
      CHECK(mesh.nodes.row(b).norm() == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(mesh.is_boundary[b]);
    }
    // All interior nodes strictly inside the unit circle.
    for (int i = 0; i < mesh.dof_count(); ++i) {
      if (!mesh.is_boundary[i]) CHECK(mesh.nodes.row(i).norm() < 1.0 - 1e-8);
    }
  }
}

TEST_CASE("mesh elements are positively oriented and cover the disk") {
  const DiskMesh mesh = rockrisk::build_mesh(3);
  double area = 0.0;
  for (const auto& q : mesh.quads) {
    // Shoelace area of the straight-sided quad.
    double a = 0.0;
    for (int k = 0; k < 4; ++k) {
      const auto p0 = mesh.nodes.row(q[k]);
      const auto p1 = mesh.nodes.row(q[(k + 1) % 4]);
      a += p0[0] * p1[1] - p1[0] * p0[1];
    }
    a *= 0.5;
    CHECK(a > 0.0);
    area += a;
  }
  // Inscribed polygon area tends to pi from below.
  CHECK(area < kPi);
  CHECK(area == doctest::Approx(kPi).epsilon(0.01));
}

TEST_CASE("advection velocity magnitude equals xi") {
  const AdvectionField adv;
  for (double xi : {0.0, 5.0, 12.5, 20.0}) {
    CHECK(adv.velocity(xi).norm() == doctest::Approx(xi).epsilon(1e-12));
  }
  // At xi = v_max the angle wraps to +pi/2.
  CHECK(adv.velocity(20.0)[1] == doctest::Approx(20.0));
}

TEST_CASE("mass matrix measures the polygonal disk") {
  const DiskFem fem(rockrisk::build_mesh(3));
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(fem.dof_count());
  CHECK(ones.dot(fem.mass() * ones) == doctest::Approx(kPi).epsilon(0.01));
}

TEST_CASE("forward solve matches the paraboloid solution") {
  CHECK(paraboloid_error(3) < 2.5e-2);
}

TEST_CASE("forward solve converges at second order in L2") {
  const double e1 = paraboloid_error(1);
  const double e2 = paraboloid_error(2);
  const double e3 = paraboloid_error(3);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.15));
  CHECK(e2 / e3 == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("adjoint gradient matches central differences") {
  const DiskFem fem(rockrisk::build_mesh(2));
  const AdvectionField adv;
  std::mt19937_64 rng(29);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uxi(0.0, 20.0);
  for (int trial = 0; trial < 3; ++trial) {
    const double xi = uxi(rng);
    const rockrisk::ScenarioSolver2d solver(fem, adv, xi);
    Eigen::VectorXd z(fem.dof_count()), dz(fem.dof_count());
    for (int i = 0; i < fem.dof_count(); ++i) {
      z[i] = normal(rng);
      dz[i] = normal(rng);
    }
    const Eigen::VectorXd f = Eigen::VectorXd::Zero(fem.dof_count());
    Eigen::VectorXd grad;
    solver.objective_and_gradient(z, f, grad);
    const double eps = 1e-5;
    const double fd = (solver.objective(z + eps * dz, f) -
                       solver.objective(z - eps * dz, f)) /
                      (2.0 * eps);
    CHECK(grad.dot(dz) == doctest::Approx(fd).epsilon(1e-6));
  }
}
