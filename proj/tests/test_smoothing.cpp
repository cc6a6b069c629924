#include <cmath>

#include "doctest.h"
#include "rockrisk/smoothing.hpp"

using rockrisk::SmoothingParams;

TEST_CASE("smoothed positive part brackets the positive part") {
  // 0 <= sp(x) - x_+ <= delta*ln2, with equality to delta*ln2 at x = 0.
  for (double delta : {1e-1, 1e-2, 1e-3}) {
    const SmoothingParams p{delta};
    for (int i = 0; i <= 2000; ++i) {
      const double x = -10.0 + 20.0 * i / 2000.0;
      const double gap = rockrisk::plus_smooth(x, p) - std::max(x, 0.0);
      CHECK(gap >= 0.0);
      CHECK(gap <= delta * std::log(2.0) + 1e-15);
    }
    CHECK(rockrisk::plus_smooth(0.0, p) ==
          doctest::Approx(delta * std::log(2.0)).epsilon(1e-14));
  }
}

TEST_CASE("smoothed positive part handles extreme arguments") {
  const SmoothingParams p{1e-3};
  CHECK(rockrisk::plus_smooth(1e8, p) == doctest::Approx(1e8));
  CHECK(rockrisk::plus_smooth(-1e8, p) == 0.0);
  CHECK(std::isfinite(rockrisk::plus_smooth(700.0, p)));
  CHECK(std::isfinite(rockrisk::plus_smooth(-700.0, p)));
}

TEST_CASE("derivative is the logistic sigmoid") {
  const SmoothingParams p{1e-2};
  CHECK(rockrisk::plus_smooth_derivative(0.0, p) == doctest::Approx(0.5));
  // Stay within a few deltas of the kink; far outside the sigmoid rounds
  // to exactly 0 or 1 in double precision.
  double prev = -1.0;
  for (int i = 0; i <= 200; ++i) {
    const double x = -0.08 + 0.16 * i / 200.0;
    const double d = rockrisk::plus_smooth_derivative(x, p);
    CHECK(d > 0.0);
    CHECK(d < 1.0);
    CHECK(d > prev);  // strictly increasing
    prev = d;
  }
  // Finite-difference agreement away from saturation.
  const double h = 1e-7;
  for (double x : {-0.03, -0.005, 0.0, 0.004, 0.02}) {
    const double fd =
        (rockrisk::plus_smooth(x + h, p) - rockrisk::plus_smooth(x - h, p)) /
        (2.0 * h);
    CHECK(rockrisk::plus_smooth_derivative(x, p) ==
          doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("uniform bound constants match the closed form") {
  // For the logistic kernel Delta1 = 0 and Delta2 = ln 2 independent of
  // delta; the quadrature route must land on the analytic values.
  for (double delta : {1e-1, 1e-3}) {
    const auto c = rockrisk::uniform_bound_constants(SmoothingParams{delta});
    CHECK(std::abs(c.delta1) <= 1e-10);
    CHECK(std::abs(c.delta2 - std::log(2.0)) <= 1e-10);
  }
}
