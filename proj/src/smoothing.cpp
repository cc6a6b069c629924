#include "rockrisk/smoothing.hpp"

#include <functional>
#include <stdexcept>

namespace rockrisk {
namespace {

double logistic_kernel(double x) {
  const double e = std::exp(-std::abs(x));
  return e / ((1.0 + e) * (1.0 + e));
}

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double fa, double fm, double fb, double whole,
                        double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double err = left + right - whole;
  if (depth <= 0) {
    throw std::runtime_error("smoothing kernel quadrature did not converge");
  }
  if (std::abs(err) < 15.0 * tol) {
    return left + right + err / 15.0;
  }
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol) {
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

}  // namespace

UniformBoundConstants uniform_bound_constants(const SmoothingParams& p) {
  if (p.kernel != SmoothingKernel::LogisticCM) {
    throw std::runtime_error("unsupported smoothing kernel");
  }
  // The kernel decays like exp(-|x|); truncating at +-60 is below round-off.
  const double cut = 60.0;
  const double tol = 1e-13;
  const double first_moment =
      integrate([](double s) { return s * logistic_kernel(s); }, -cut, cut, tol);
  const double neg_abs_moment = integrate(
      [](double s) { return std::abs(s) * logistic_kernel(s); }, -cut, 0.0, tol);
  return {std::max(first_moment, 0.0), neg_abs_moment};
}

}  // namespace rockrisk
