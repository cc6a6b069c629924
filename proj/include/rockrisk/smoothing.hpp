#pragma once

#include <algorithm>
#include <cmath>

namespace rockrisk {

enum class SmoothingKernel { LogisticCM };

/// Mollification level and generating kernel for the smoothed positive part.
struct SmoothingParams {
  double delta = 1e-3;
  SmoothingKernel kernel = SmoothingKernel::LogisticCM;
};

/// Smoothed positive part (x)_{+,delta}.
///
/// For the logistic kernel this collapses to the softplus
/// x + delta*ln(1 + exp(-x/delta)). Evaluated as
/// max(x,0) + delta*ln(1 + exp(-|x|/delta)) so that |x|/delta large never
/// overflows the exponential.
inline double plus_smooth(double x, const SmoothingParams& p) {
  const double d = p.delta;
  return std::max(x, 0.0) + d * std::log1p(std::exp(-std::abs(x) / d));
}

/// Derivative of the smoothed positive part: the sigmoid 1/(1+exp(-x/delta)).
/// Strictly inside (0,1) and strictly increasing in x.
inline double plus_smooth_derivative(double x, const SmoothingParams& p) {
  const double s = x / p.delta;
  if (s >= 0.0) {
    return 1.0 / (1.0 + std::exp(-s));
  }
  const double e = std::exp(s);
  return e / (1.0 + e);
}

/// Constants (Delta1, Delta2) with
///   -delta*Delta1 <= (x)_{+,delta} - (x)_+ <= delta*Delta2   for all x.
/// Delta1 = max{ integral of sigma*zeta, 0 }, Delta2 = integral over
/// (-inf,0] of |sigma|*zeta. Computed by adaptive quadrature of the kernel.
struct UniformBoundConstants {
  double delta1;
  double delta2;
};

UniformBoundConstants uniform_bound_constants(const SmoothingParams& p);

}  // namespace rockrisk
