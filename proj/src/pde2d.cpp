#include "rockrisk/pde2d.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

namespace rockrisk {

namespace {

/// Tolerance-based node deduplication on a spatial hash grid.
class NodeMerger {
 public:
  int insert(double x, double y, std::vector<std::array<double, 2>>& nodes) {
    const std::int64_t cx = cell(x);
    const std::int64_t cy = cell(y);
    for (std::int64_t dx = -1; dx <= 1; ++dx) {
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        auto it = buckets_.find(key(cx + dx, cy + dy));
        if (it == buckets_.end()) continue;
        for (int idx : it->second) {
          const double ex = nodes[idx][0] - x;
          const double ey = nodes[idx][1] - y;
          if (ex * ex + ey * ey < kTol * kTol) {
            return idx;
          }
        }
      }
    }
    const int idx = static_cast<int>(nodes.size());
    nodes.push_back({x, y});
    buckets_[key(cx, cy)].push_back(idx);
    return idx;
  }

 private:
  static constexpr double kCell = 1e-7;
  static constexpr double kTol = 1e-12;
  static std::int64_t cell(double v) {
    return static_cast<std::int64_t>(std::floor(v / kCell));
  }
  static std::uint64_t key(std::int64_t cx, std::int64_t cy) {
    return static_cast<std::uint64_t>(cx) * 0x9E3779B97F4A7C15ULL ^
           static_cast<std::uint64_t>(cy);
  }
  std::unordered_map<std::uint64_t, std::vector<int>> buckets_;
};

constexpr double kSquareHalf = 0.5;  // half-width of the central patch

}  // namespace

DiskMesh build_mesh(int refinement) {
  if (refinement < 0) {
    throw std::invalid_argument("build_mesh: refinement must be >= 0");
  }
  const int m = 1 << refinement;
  std::vector<std::array<double, 2>> nodes;
  std::vector<bool> boundary_flags;
  NodeMerger merger;

  auto add_node = [&](double x, double y, bool on_boundary) {
    const int idx = merger.insert(x, y, nodes);
    if (static_cast<int>(boundary_flags.size()) <= idx) {
      boundary_flags.resize(idx + 1, false);
    }
    boundary_flags[idx] = boundary_flags[idx] || on_boundary;
    return idx;
  };

  DiskMesh mesh;
  mesh.refinement = refinement;

  auto add_patch_quads = [&](const std::vector<std::vector<int>>& grid) {
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        mesh.quads.push_back({grid[i][j], grid[i + 1][j], grid[i + 1][j + 1],
                              grid[i][j + 1]});
      }
    }
  };

  // Central square patch.
  {
    std::vector<std::vector<int>> grid(m + 1, std::vector<int>(m + 1));
    for (int i = 0; i <= m; ++i) {
      for (int j = 0; j <= m; ++j) {
        const double x = -kSquareHalf + 2.0 * kSquareHalf * i / m;
        const double y = -kSquareHalf + 2.0 * kSquareHalf * j / m;
        grid[i][j] = add_node(x, y, false);
      }
    }
    add_patch_quads(grid);
  }

  // Four outer patches: the east patch blends the square's right edge into
  // the circle arc [-pi/4, pi/4]; the others are exact rotations of it.
  const double rot_cos[4] = {1.0, 0.0, -1.0, 0.0};
  const double rot_sin[4] = {0.0, 1.0, 0.0, -1.0};
  for (int rot = 0; rot < 4; ++rot) {
    std::vector<std::vector<int>> grid(m + 1, std::vector<int>(m + 1));
    for (int i = 0; i <= m; ++i) {      // radial direction, i = m is the circle
      for (int j = 0; j <= m; ++j) {    // tangential direction
        const double s = static_cast<double>(i) / m;
        const double t = static_cast<double>(j) / m;
        const double inner_x = kSquareHalf;
        const double inner_y = -kSquareHalf + 2.0 * kSquareHalf * t;
        const double theta =
            -std::numbers::pi / 4.0 + t * std::numbers::pi / 2.0;
        double x = (1.0 - s) * inner_x + s * std::cos(theta);
        double y = (1.0 - s) * inner_y + s * std::sin(theta);
        const double rx = rot_cos[rot] * x - rot_sin[rot] * y;
        const double ry = rot_sin[rot] * x + rot_cos[rot] * y;
        grid[i][j] = add_node(rx, ry, i == m);
      }
    }
    add_patch_quads(grid);
  }

  mesh.nodes.resize(static_cast<Eigen::Index>(nodes.size()), 2);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (boundary_flags[i]) {
      const double r = std::hypot(nodes[i][0], nodes[i][1]);
      nodes[i][0] /= r;
      nodes[i][1] /= r;
    }
    mesh.nodes(static_cast<Eigen::Index>(i), 0) = nodes[i][0];
    mesh.nodes(static_cast<Eigen::Index>(i), 1) = nodes[i][1];
  }
  mesh.is_boundary = boundary_flags;
  for (std::size_t i = 0; i < boundary_flags.size(); ++i) {
    if (boundary_flags[i]) {
      mesh.boundary_nodes.push_back(static_cast<int>(i));
    }
  }
  return mesh;
}

Eigen::Vector2d AdvectionField::velocity(double xi) const {
  const double angle =
      xi * std::numbers::pi / v_max - std::numbers::pi / 2.0;
  return {xi * std::cos(angle), xi * std::sin(angle)};
}

DiskFem::DiskFem(DiskMesh mesh) : mesh_(std::move(mesh)) {
  const int n = mesh_.dof_count();
  full_to_interior_.assign(n, -1);
  for (int i = 0; i < n; ++i) {
    if (!mesh_.is_boundary[i]) {
      full_to_interior_[i] = static_cast<int>(interior_.size());
      interior_.push_back(i);
    }
  }

  using T = Eigen::Triplet<double>;
  std::vector<T> ta, tcx, tcy, tm;
  const std::size_t reserve = mesh_.quads.size() * 16;
  ta.reserve(reserve);
  tcx.reserve(reserve);
  tcy.reserve(reserve);
  tm.reserve(reserve);

  const double gp = 1.0 / std::sqrt(3.0);
  const double qpts[2] = {-gp, gp};

  for (const auto& quad : mesh_.quads) {
    Eigen::Matrix<double, 4, 2> coords;
    for (int a = 0; a < 4; ++a) {
      coords.row(a) = mesh_.nodes.row(quad[a]);
    }
    for (double xi_q : qpts) {
      for (double eta_q : qpts) {
        // Bilinear shape functions on [-1,1]^2, counterclockwise ordering.
        const double sx[4] = {-1.0, 1.0, 1.0, -1.0};
        const double sy[4] = {-1.0, -1.0, 1.0, 1.0};
        Eigen::Vector4d shape;
        Eigen::Matrix<double, 4, 2> dref;
        for (int a = 0; a < 4; ++a) {
          shape[a] = 0.25 * (1.0 + sx[a] * xi_q) * (1.0 + sy[a] * eta_q);
          dref(a, 0) = 0.25 * sx[a] * (1.0 + sy[a] * eta_q);
          dref(a, 1) = 0.25 * sy[a] * (1.0 + sx[a] * xi_q);
        }
        const Eigen::Matrix2d jac = coords.transpose() * dref;
        const double det = jac.determinant();
        if (det <= 0.0) {
          throw std::runtime_error("DiskFem: non-positive element Jacobian");
        }
        const Eigen::Matrix<double, 4, 2> dphys =
            dref * jac.inverse();  // rows: grad of each shape function
        for (int a = 0; a < 4; ++a) {
          for (int b = 0; b < 4; ++b) {
            const double w = det;  // unit quadrature weights
            ta.emplace_back(quad[a], quad[b],
                            w * dphys.row(a).dot(dphys.row(b)));
            tcx.emplace_back(quad[a], quad[b], w * shape[a] * dphys(b, 0));
            tcy.emplace_back(quad[a], quad[b], w * shape[a] * dphys(b, 1));
            tm.emplace_back(quad[a], quad[b], w * shape[a] * shape[b]);
          }
        }
      }
    }
  }

  stiffness_.resize(n, n);
  adv_x_.resize(n, n);
  adv_y_.resize(n, n);
  mass_.resize(n, n);
  stiffness_.setFromTriplets(ta.begin(), ta.end());
  adv_x_.setFromTriplets(tcx.begin(), tcx.end());
  adv_y_.setFromTriplets(tcy.begin(), tcy.end());
  mass_.setFromTriplets(tm.begin(), tm.end());
}

Eigen::SparseMatrix<double> DiskFem::system_matrix(const AdvectionField& adv,
                                                   double xi) const {
  if (xi < 0.0 || xi > adv.v_max) {
    throw std::invalid_argument("system_matrix: xi outside [0, v_max]");
  }
  const Eigen::Vector2d v = adv.velocity(xi);
  Eigen::SparseMatrix<double> full =
      stiffness_ + v[0] * adv_x_ + v[1] * adv_y_;
  const int ni = interior_count();
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(full.nonZeros());
  for (int col = 0; col < full.outerSize(); ++col) {
    const int jc = full_to_interior_[col];
    if (jc < 0) continue;
    for (Eigen::SparseMatrix<double>::InnerIterator it(full, col); it; ++it) {
      const int ir = full_to_interior_[static_cast<int>(it.row())];
      if (ir < 0) continue;
      trips.emplace_back(ir, jc, it.value());
    }
  }
  Eigen::SparseMatrix<double> k(ni, ni);
  k.setFromTriplets(trips.begin(), trips.end());
  return k;
}

Eigen::VectorXd DiskFem::restrict_interior(const Eigen::VectorXd& full) const {
  Eigen::VectorXd out(interior_count());
  for (int i = 0; i < interior_count(); ++i) {
    out[i] = full[interior_[i]];
  }
  return out;
}

Eigen::VectorXd DiskFem::extend_with_zeros(
    const Eigen::VectorXd& interior) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(dof_count());
  for (int i = 0; i < interior_count(); ++i) {
    out[interior_[i]] = interior[i];
  }
  return out;
}

ScenarioSolver2d::ScenarioSolver2d(const DiskFem& fem,
                                   const AdvectionField& adv, double xi)
    : fem_(&fem), xi_(xi) {
  k_ = fem.system_matrix(adv, xi);
  kt_ = k_.transpose();
  k_.makeCompressed();
  kt_.makeCompressed();
  lu_.compute(k_);
  lu_t_.compute(kt_);
  if (lu_.info() != Eigen::Success || lu_t_.info() != Eigen::Success) {
    throw std::runtime_error("ScenarioSolver2d: singular system matrix");
  }
}

Eigen::VectorXd ScenarioSolver2d::solve_forward(const Eigen::VectorXd& z,
                                                const Eigen::VectorXd& f) const {
  const Eigen::VectorXd rhs = fem_->mass() * (f + z);
  return fem_->extend_with_zeros(lu_.solve(fem_->restrict_interior(rhs)));
}

double ScenarioSolver2d::objective(const Eigen::VectorXd& z,
                                   const Eigen::VectorXd& f) const {
  const Eigen::VectorXd u = solve_forward(z, f);
  const Eigen::VectorXd e = u.array() - 1.0;
  return 0.5 * e.dot(fem_->mass() * e);
}

double ScenarioSolver2d::objective_and_gradient(const Eigen::VectorXd& z,
                                                const Eigen::VectorXd& f,
                                                Eigen::VectorXd& grad) const {
  const Eigen::VectorXd u = solve_forward(z, f);
  const Eigen::VectorXd e = u.array() - 1.0;
  const Eigen::VectorXd me = fem_->mass() * e;
  const Eigen::VectorXd p =
      fem_->extend_with_zeros(lu_t_.solve(fem_->restrict_interior(me)));
  grad = fem_->mass() * p;
  return 0.5 * e.dot(me);
}

Eigen::VectorXd solve_forward(const DiskFem& fem, const AdvectionField& adv,
                              double xi, const Eigen::VectorXd& z,
                              const Eigen::VectorXd& f) {
  return ScenarioSolver2d(fem, adv, xi).solve_forward(z, f);
}

double objective_and_gradient(const DiskFem& fem, const AdvectionField& adv,
                              double xi, const Eigen::VectorXd& z,
                              Eigen::VectorXd& grad) {
  const Eigen::VectorXd f = Eigen::VectorXd::Zero(fem.dof_count());
  return ScenarioSolver2d(fem, adv, xi).objective_and_gradient(z, f, grad);
}

void write_nodal_csv(const DiskMesh& mesh, const Eigen::VectorXd& values,
                     const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("write_nodal_csv: cannot open " + path);
  }
  out << "x,y,value\n";
  out.precision(17);
  for (Eigen::Index i = 0; i < mesh.nodes.rows(); ++i) {
    out << mesh.nodes(i, 0) << ',' << mesh.nodes(i, 1) << ',' << values[i]
        << '\n';
  }
}

}  // namespace rockrisk
