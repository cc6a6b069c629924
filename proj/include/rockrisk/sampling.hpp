#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace rockrisk {

/// Sample points with probability weights and clean/corrupted labels.
struct ScenarioSet {
  Eigen::MatrixXd points;          // one row per scenario
  Eigen::VectorXd weights;         // nonnegative, sums to 1
  std::vector<bool> corrupted;     // per-scenario label
};

void validate(const ScenarioSet& s);

/// n iid standard-normal d-vectors from a counter-based PRNG, weights 1/n.
/// Deterministic: the same (n, d, seed) always yields identical bits.
ScenarioSet sample_gaussian_scenarios(int n, int d, std::uint64_t seed);

/// Scale the first round(fraction*n) scenarios componentwise by `factor`
/// and mark them corrupted.
ScenarioSet corrupt_by_scaling(const ScenarioSet& s, double fraction,
                               double factor);

enum class DensityKind { TruncExp, Algebraic, Mixture };

/// Probability density on [0, support_max].
///   TruncExp:  k/(1-exp(-k*vmax)) * exp(-k*xi)
///   Algebraic: 1/ln(vmax/a + 1) * 1/(xi + a)
///   Mixture:   w*TruncExp + (1-w)*Algebraic
struct DensitySpec {
  DensityKind kind = DensityKind::TruncExp;
  double k = 0.25;          // TruncExp decay rate
  double a = 5.0;           // Algebraic offset
  double mix_weight = 0.5;  // Mixture weight on TruncExp
  double support_max = 20.0;
};

double density_eval(const DensitySpec& d, double xi);

struct Quadrature {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

/// Gauss-Legendre rule on [lo, hi]; exact for polynomials of degree 2n-1.
Quadrature gauss_legendre(int n, double lo, double hi);

/// First n points of the base-2 radical-inverse (van der Corput) sequence,
/// i.e. the first Sobol dimension.
std::vector<double> sobol_1d(int n);

/// Inverse CDF of the truncated exponential: pushes uniform(0,1) samples
/// forward to the TruncExp density.
double inverse_cdf_truncexp(double u, double k, double vmax);

/// Audit dump: one row per sample (index, components..., weight, corrupted).
void write_scenarios_csv(const ScenarioSet& s, const std::string& path);

}  // namespace rockrisk
