#include <cmath>
#include <numeric>

#include "doctest.h"
#include "rockrisk/sampling.hpp"

using rockrisk::DensityKind;
using rockrisk::DensitySpec;
using rockrisk::Quadrature;
using rockrisk::ScenarioSet;

TEST_CASE("gaussian sampling is deterministic and well-formed") {
  const ScenarioSet a = rockrisk::sample_gaussian_scenarios(100, 5, 42);
  const ScenarioSet b = rockrisk::sample_gaussian_scenarios(100, 5, 42);
  const ScenarioSet c = rockrisk::sample_gaussian_scenarios(100, 5, 43);
  CHECK((a.points.array() == b.points.array()).all());  // bitwise reproducible
  CHECK_FALSE((a.points.array() == c.points.array()).all());
  CHECK(a.weights.sum() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(a.weights.minCoeff() == doctest::Approx(0.01));
  CHECK_NOTHROW(rockrisk::validate(a));
  // Crude moment sanity on 10000 draws.
  const ScenarioSet big = rockrisk::sample_gaussian_scenarios(10000, 2, 1);
  CHECK(std::abs(big.points.col(0).mean()) < 0.05);
  const double var =
      big.points.col(0).squaredNorm() / big.points.rows();
  CHECK(var == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("corruption scales a prefix and labels it") {
  const ScenarioSet base = rockrisk::sample_gaussian_scenarios(40, 3, 7);
  const ScenarioSet corr = rockrisk::corrupt_by_scaling(base, 0.25, 5.0);
  int n_corr = 0;
  for (bool b : corr.corrupted) n_corr += b ? 1 : 0;
  CHECK(n_corr == 10);
  for (int i = 0; i < 40; ++i) {
    const double factor = i < 10 ? 5.0 : 1.0;
    CHECK((corr.points.row(i).array() == base.points.row(i).array() * factor)
              .all());
    CHECK(corr.corrupted[i] == (i < 10));
  }
  CHECK((corr.weights.array() == base.weights.array()).all());
}

TEST_CASE("densities integrate to one") {
  const Quadrature gq = rockrisk::gauss_legendre(200, 0.0, 20.0);
  for (DensityKind kind :
       {DensityKind::TruncExp, DensityKind::Algebraic, DensityKind::Mixture}) {
    DensitySpec d;
    d.kind = kind;
    double integral = 0.0;
    for (Eigen::Index i = 0; i < gq.nodes.size(); ++i) {
      integral += gq.weights[i] * rockrisk::density_eval(d, gq.nodes[i]);
    }
    CHECK(integral == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("density closed forms at hand-checked points") {
  DensitySpec d;
  d.kind = DensityKind::TruncExp;
  const double c = 0.25 / (1.0 - std::exp(-5.0));
  CHECK(rockrisk::density_eval(d, 0.0) == doctest::Approx(c));
  CHECK(rockrisk::density_eval(d, 4.0) == doctest::Approx(c * std::exp(-1.0)));
  d.kind = DensityKind::Algebraic;
  CHECK(rockrisk::density_eval(d, 0.0) ==
        doctest::Approx(1.0 / (5.0 * std::log(5.0))));
}

TEST_CASE("gauss_legendre integrates polynomials exactly") {
  const Quadrature gq = rockrisk::gauss_legendre(5, -1.0, 3.0);
  CHECK(gq.weights.sum() == doctest::Approx(4.0).epsilon(1e-14));
  // x^9 is within the degree-9 exactness of a 5-point rule.
  double m9 = 0.0, m4 = 0.0;
  for (Eigen::Index i = 0; i < gq.nodes.size(); ++i) {
    m9 += gq.weights[i] * std::pow(gq.nodes[i], 9);
    m4 += gq.weights[i] * std::pow(gq.nodes[i], 4);
  }
  CHECK(m9 == doctest::Approx((std::pow(3.0, 10) - 1.0) / 10.0).epsilon(1e-12));
  CHECK(m4 == doctest::Approx((std::pow(3.0, 5) + 1.0) / 5.0).epsilon(1e-13));
}

TEST_CASE("van der Corput sequence prefix") {
  const auto u = rockrisk::sobol_1d(7);
  const double expect[] = {0.5, 0.25, 0.75, 0.125, 0.625, 0.375, 0.875};
  REQUIRE(u.size() == 7);
  for (int i = 0; i < 7; ++i) CHECK(u[i] == doctest::Approx(expect[i]));
}

TEST_CASE("truncated-exponential inverse CDF round trips") {
  const double k = 0.25, vmax = 20.0;
  const double norm = 1.0 - std::exp(-k * vmax);
  for (double u : {0.01, 0.25, 0.5, 0.9, 0.999}) {
    const double x = rockrisk::inverse_cdf_truncexp(u, k, vmax);
    CHECK(x >= 0.0);
    CHECK(x <= vmax);
    const double cdf = (1.0 - std::exp(-k * x)) / norm;
    CHECK(cdf == doctest::Approx(u).epsilon(1e-12));
  }
  CHECK(rockrisk::inverse_cdf_truncexp(0.0, k, vmax) == doctest::Approx(0.0));
}
