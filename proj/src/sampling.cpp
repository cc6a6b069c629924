#include "rockrisk/sampling.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

namespace rockrisk {

namespace {

/// splitmix64-style counter mix; a pure function of (seed, counter).
std::uint64_t mix64(std::uint64_t seed, std::uint64_t counter) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (counter + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double uniform01(std::uint64_t seed, std::uint64_t counter) {
  return static_cast<double>(mix64(seed, counter) >> 11) * 0x1.0p-53;
}

/// Box-Muller on two counter-indexed uniforms.
double standard_normal(std::uint64_t seed, std::uint64_t index) {
  const double u1 = uniform01(seed, 2 * index) + 0x1.0p-54;  // keep u1 > 0
  const double u2 = uniform01(seed, 2 * index + 1);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace

void validate(const ScenarioSet& s) {
  const Eigen::Index n = s.points.rows();
  if (s.weights.size() != n ||
      static_cast<Eigen::Index>(s.corrupted.size()) != n) {
    throw std::invalid_argument("ScenarioSet: length mismatch");
  }
  double sum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (s.weights[i] < 0.0) {
      throw std::invalid_argument("ScenarioSet: negative weight");
    }
    sum += s.weights[i];
  }
  if (std::abs(sum - 1.0) > 1e-10) {
    throw std::invalid_argument("ScenarioSet: weights do not sum to 1");
  }
}

ScenarioSet sample_gaussian_scenarios(int n, int d, std::uint64_t seed) {
  if (n < 1 || d < 1) {
    throw std::invalid_argument("sample_gaussian_scenarios: n, d must be >= 1");
  }
  ScenarioSet s;
  s.points.resize(n, d);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < d; ++k) {
      s.points(i, k) = standard_normal(
          seed, static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(d) +
                    static_cast<std::uint64_t>(k));
    }
  }
  s.weights = Eigen::VectorXd::Constant(n, 1.0 / n);
  s.corrupted.assign(n, false);
  return s;
}

ScenarioSet corrupt_by_scaling(const ScenarioSet& s, double fraction,
                               double factor) {
  if (fraction < 0.0 || fraction > 1.0) {
    throw std::invalid_argument("corrupt_by_scaling: fraction outside [0,1]");
  }
  ScenarioSet out = s;
  const Eigen::Index n = s.points.rows();
  const Eigen::Index m = static_cast<Eigen::Index>(
      std::llround(fraction * static_cast<double>(n)));
  for (Eigen::Index i = 0; i < m; ++i) {
    out.points.row(i) *= factor;
    out.corrupted[i] = true;
  }
  return out;
}

double density_eval(const DensitySpec& d, double xi) {
  if (xi < 0.0 || xi > d.support_max) {
    throw std::invalid_argument("density_eval: xi outside support");
  }
  auto trunc_exp = [&] {
    return d.k / (1.0 - std::exp(-d.k * d.support_max)) * std::exp(-d.k * xi);
  };
  auto algebraic = [&] {
    return 1.0 / std::log(d.support_max / d.a + 1.0) / (xi + d.a);
  };
  switch (d.kind) {
    case DensityKind::TruncExp:
      return trunc_exp();
    case DensityKind::Algebraic:
      return algebraic();
    case DensityKind::Mixture:
      return d.mix_weight * trunc_exp() + (1.0 - d.mix_weight) * algebraic();
  }
  throw std::logic_error("density_eval: unknown kind");
}

Quadrature gauss_legendre(int n, double lo, double hi) {
  if (n < 1) {
    throw std::invalid_argument("gauss_legendre: n must be >= 1");
  }
  Quadrature q;
  q.nodes.resize(n);
  q.weights.resize(n);
  // Newton iteration on the Legendre polynomial P_n; nodes come in +- pairs.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    q.nodes[i] = -x;
    q.nodes[n - 1 - i] = x;
    q.weights[i] = w;
    q.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) {
    q.nodes[n / 2] = 0.0;
  }
  // Affine map [-1,1] -> [lo,hi].
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  for (int i = 0; i < n; ++i) {
    q.nodes[i] = mid + half * q.nodes[i];
    q.weights[i] *= half;
  }
  return q;
}

std::vector<double> sobol_1d(int n) {
  if (n < 1) {
    throw std::invalid_argument("sobol_1d: n must be >= 1");
  }
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) {
    std::uint64_t bits = static_cast<std::uint64_t>(i) + 1;
    double inv = 0.0, base = 0.5;
    while (bits) {
      if (bits & 1ULL) inv += base;
      bits >>= 1;
      base *= 0.5;
    }
    out[i] = inv;
  }
  return out;
}

double inverse_cdf_truncexp(double u, double k, double vmax) {
  if (u < 0.0 || u >= 1.0) {
    throw std::invalid_argument("inverse_cdf_truncexp: u outside [0,1)");
  }
  return -std::log1p(-u * (1.0 - std::exp(-k * vmax))) / k;
}

void write_scenarios_csv(const ScenarioSet& s, const std::string& path) {
  std::ofstream f(path);
  if (!f) {
    throw std::runtime_error("write_scenarios_csv: cannot open " + path);
  }
  f << "index";
  for (Eigen::Index k = 0; k < s.points.cols(); ++k) {
    f << ",xi" << k;
  }
  f << ",weight,corrupted\n";
  f.precision(17);
  for (Eigen::Index i = 0; i < s.points.rows(); ++i) {
    f << i;
    for (Eigen::Index k = 0; k < s.points.cols(); ++k) {
      f << ',' << s.points(i, k);
    }
    f << ',' << s.weights[i] << ',' << (s.corrupted[i] ? 1 : 0) << '\n';
  }
}

}  // namespace rockrisk
