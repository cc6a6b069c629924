#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "rockrisk/risk.hpp"

using rockrisk::ExactCvar;
using rockrisk::RiskSpec;
using rockrisk::SmoothingParams;
using rockrisk::WeightedOutcomes;

namespace {

WeightedOutcomes random_outcomes(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> val(-5.0, 5.0);
  std::uniform_real_distribution<double> wgt(0.05, 1.0);
  WeightedOutcomes o;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    o.values.push_back(val(rng));
    o.weights.push_back(wgt(rng));
    sum += o.weights.back();
  }
  for (double& w : o.weights) w /= sum;
  return o;
}

}  // namespace

TEST_CASE("outcome validation rejects malformed inputs") {
  CHECK_THROWS_AS(rockrisk::validate(WeightedOutcomes{}),
                  std::invalid_argument);
  CHECK_THROWS_AS(rockrisk::validate(WeightedOutcomes{{1.0, 2.0}, {1.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(rockrisk::validate(WeightedOutcomes{{1.0}, {-0.1}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(rockrisk::validate(WeightedOutcomes{{1.0, 2.0}, {0.6, 0.3}}),
                  std::invalid_argument);
  CHECK_NOTHROW(rockrisk::validate(WeightedOutcomes{{1.0, 2.0}, {0.4, 0.6}}));
}

TEST_CASE("exact CVaR on hand-checked instances") {
  // Uniform two-point distribution, beta = 0.5: CVaR is the larger value.
  const WeightedOutcomes two{{1.0, 3.0}, {0.5, 0.5}};
  CHECK(rockrisk::cvar_exact(two, {0.5}).cvar == doctest::Approx(3.0));
  // beta = 0: CVaR is the mean.
  CHECK(rockrisk::cvar_exact(two, {0.0}).cvar == doctest::Approx(2.0));
  // Degenerate distribution: CVaR equals the point mass value for any beta.
  const WeightedOutcomes one{{4.2}, {1.0}};
  CHECK(rockrisk::cvar_exact(one, {0.9}).cvar == doctest::Approx(4.2));
  // Uniform four-point, beta = 0.75: worst quarter.
  const WeightedOutcomes four{{1.0, 2.0, 3.0, 4.0}, {0.25, 0.25, 0.25, 0.25}};
  CHECK(rockrisk::cvar_exact(four, {0.75}).cvar == doctest::Approx(4.0));
}

TEST_CASE("exact CVaR equals a dense grid minimization") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const WeightedOutcomes o = random_outcomes(rng, 2 + trial % 9);
    for (double beta : {0.1, 0.5, 0.9}) {
      const RiskSpec r{beta};
      const double kappa = r.kappa();
      const ExactCvar exact = rockrisk::cvar_exact(o, r);
      const double lo = *std::min_element(o.values.begin(), o.values.end());
      const double hi = *std::max_element(o.values.begin(), o.values.end());
      double best = 1e300;
      for (int g = 0; g <= 20000; ++g) {
        const double gamma = lo + (hi - lo) * g / 20000.0;
        double acc = gamma;
        for (std::size_t i = 0; i < o.values.size(); ++i) {
          acc += kappa * o.weights[i] * std::max(o.values[i] - gamma, 0.0);
        }
        best = std::min(best, acc);
      }
      // The grid overshoots the true minimum by at most the Lipschitz bound
      // of h(gamma) times the grid spacing.
      CHECK(exact.cvar <= best + 1e-12);
      CHECK(exact.cvar >= best - (1.0 + kappa) * (hi - lo) / 20000.0);
    }
  }
}

TEST_CASE("smoothed CVaR at the stationary anchor converges to exact") {
  std::mt19937_64 rng(11);
  const SmoothingParams p{1e-8};
  for (int trial = 0; trial < 40; ++trial) {
    const WeightedOutcomes o = random_outcomes(rng, 3 + trial % 10);
    for (double beta : {0.1, 0.5, 0.9}) {
      const RiskSpec r{beta};
      const auto gs = rockrisk::solve_gamma(o, r, p);
      const double smoothed = rockrisk::cvar_smoothed(o, r, gs.gamma, p);
      const double exact = rockrisk::cvar_exact(o, r).cvar;
      // sp dominates the positive part by at most delta*ln2 per term.
      CHECK(smoothed >= exact - 1e-9);
      CHECK(smoothed <= exact + r.kappa() * p.delta * std::log(2.0) + 1e-9);
    }
  }
}

TEST_CASE("solve_gamma drives the optimality residual to zero") {
  const WeightedOutcomes o{{0.5, 1.5, 2.5, 10.0}, {0.4, 0.3, 0.2, 0.1}};
  const SmoothingParams p{1e-3};
  for (double beta : {0.1, 0.5, 0.9, 0.99}) {
    const auto gs = rockrisk::solve_gamma(o, {beta}, p);
    CHECK_FALSE(gs.degenerate);
    CHECK(gs.residual <= 1e-9);
    // Residual recomputed independently.
    double s = 0.0;
    for (std::size_t i = 0; i < o.values.size(); ++i) {
      s += o.weights[i] *
           rockrisk::plus_smooth_derivative(o.values[i] - gs.gamma, p);
    }
    CHECK(std::abs(1.0 - s / (1.0 - beta)) <= 1e-9);
  }
}

TEST_CASE("solve_gamma flags the beta = 0 degenerate case") {
  const WeightedOutcomes o{{1.0, 2.0}, {0.5, 0.5}};
  const auto gs = rockrisk::solve_gamma(o, {0.0}, SmoothingParams{1e-3});
  CHECK(gs.degenerate);
  CHECK(gs.gamma == doctest::Approx(1.0));
}
