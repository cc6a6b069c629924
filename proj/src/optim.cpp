#include "rockrisk/optim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>
#include <vector>

namespace rockrisk {

namespace {

struct LineSearchResult {
  double step = 0.0;
  double value = 0.0;
  bool ok = false;
};

/// Strong-Wolfe line search: bracketing phase with step doubling followed by
/// bisection zoom. phi(a) = f(x + a*d).
LineSearchResult wolfe_line_search(const ValueGradFn& objective,
                                   const Eigen::VectorXd& x, double f0,
                                   const Eigen::VectorXd& g0,
                                   const Eigen::VectorXd& d,
                                   Eigen::VectorXd& x_out,
                                   Eigen::VectorXd& g_out,
                                   const LbfgsOptions& opts) {
  const double dphi0 = g0.dot(d);
  Eigen::VectorXd g(x.size());
  auto phi = [&](double a, double& dphi) {
    x_out = x + a * d;
    const double v = objective(x_out, g);
    dphi = g.dot(d);
    return v;
  };

  auto zoom = [&](double lo, double f_lo, double hi) -> LineSearchResult {
    for (int k = 0; k < 50; ++k) {
      const double a = 0.5 * (lo + hi);
      double dphi;
      const double fa = phi(a, dphi);
      if (!std::isfinite(fa) || fa > f0 + opts.wolfe_c1 * a * dphi0 ||
          fa >= f_lo) {
        hi = a;
      } else {
        if (std::abs(dphi) <= -opts.wolfe_c2 * dphi0) {
          g_out = g;
          return {a, fa, true};
        }
        if (dphi * (hi - lo) >= 0.0) {
          hi = lo;
        }
        lo = a;
        f_lo = fa;
      }
      if (std::abs(hi - lo) < 1e-16 * std::max(1.0, std::abs(lo))) {
        break;
      }
    }
    // Fall back to the best sufficient-decrease point found.
    double dphi;
    const double fa = phi(lo, dphi);
    if (std::isfinite(fa) && fa < f0) {
      g_out = g;
      return {lo, fa, true};
    }
    return {};
  };

  double a_prev = 0.0;
  double f_prev = f0;
  double a = 1.0;
  for (int i = 0; i < 50; ++i) {
    double dphi;
    const double fa = phi(a, dphi);
    if (!std::isfinite(fa) || fa > f0 + opts.wolfe_c1 * a * dphi0 ||
        (i > 0 && fa >= f_prev)) {
      return zoom(a_prev, f_prev, a);
    }
    if (std::abs(dphi) <= -opts.wolfe_c2 * dphi0) {
      g_out = g;
      return {a, fa, true};
    }
    if (dphi >= 0.0) {
      return zoom(a, fa, a_prev);
    }
    a_prev = a;
    f_prev = fa;
    a = std::min(2.0 * a, 1e8);
  }
  return {};
}

}  // namespace

LbfgsResult lbfgs_minimize(const ValueGradFn& objective, Eigen::VectorXd x0,
                           const LbfgsOptions& opts) {
  const Eigen::Index n = x0.size();
  Eigen::VectorXd g(n), x_new(n), g_new(n);
  double f = objective(x0, g);
  if (!std::isfinite(f)) {
    throw std::runtime_error("lbfgs_minimize: non-finite objective at x0");
  }

  std::deque<Eigen::VectorXd> s_hist, y_hist;
  std::deque<double> rho_hist;

  LbfgsResult res;
  res.x = x0;
  res.value = f;
  Eigen::VectorXd x = std::move(x0);

  for (int iter = 0; iter < opts.max_iters; ++iter) {
    if (g.lpNorm<Eigen::Infinity>() <= opts.grad_tol) {
      res.x = x;
      res.value = f;
      res.iterations = iter;
      res.status = LbfgsStatus::Converged;
      return res;
    }

    // Two-loop recursion.
    Eigen::VectorXd q = g;
    const std::size_t m = s_hist.size();
    std::vector<double> alpha(m);
    for (std::size_t k = m; k-- > 0;) {
      alpha[k] = rho_hist[k] * s_hist[k].dot(q);
      q -= alpha[k] * y_hist[k];
    }
    if (m > 0) {
      const double gamma =
          s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
      q *= gamma;
    }
    for (std::size_t k = 0; k < m; ++k) {
      const double beta = rho_hist[k] * y_hist[k].dot(q);
      q += (alpha[k] - beta) * s_hist[k];
    }
    Eigen::VectorXd d = -q;
    if (d.dot(g) >= 0.0) {
      d = -g;  // recovery: fall back to steepest descent
    }

    const LineSearchResult ls =
        wolfe_line_search(objective, x, f, g, d, x_new, g_new, opts);
    if (!ls.ok) {
      res.x = x;
      res.value = f;
      res.iterations = iter;
      res.status = LbfgsStatus::LineSearchStalled;
      return res;
    }

    Eigen::VectorXd s = x_new - x;
    Eigen::VectorXd y = g_new - g;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      rho_hist.push_back(1.0 / sy);
      if (static_cast<int>(s_hist.size()) > opts.history) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }
    x.swap(x_new);
    g.swap(g_new);
    f = ls.value;
  }
  res.x = x;
  res.value = f;
  res.iterations = opts.max_iters;
  res.status = LbfgsStatus::MaxIterations;
  return res;
}

LpSolution solve_perturbation_lp(const PerturbationLp& lp) {
  const Eigen::Index n = lp.linear_cost.size();
  if (lp.mass_weights.size() != n || lp.lower.size() != n ||
      lp.upper.size() != n) {
    throw std::invalid_argument("solve_perturbation_lp: size mismatch");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (lp.lower[i] > lp.upper[i]) {
      throw std::invalid_argument("solve_perturbation_lp: infeasible bounds");
    }
    if (lp.lower[i] > 0.0 || lp.upper[i] < 0.0) {
      throw std::invalid_argument(
          "solve_perturbation_lp: bounds must contain 0");
    }
    if (lp.mass_weights[i] <= 0.0) {
      throw std::invalid_argument(
          "solve_perturbation_lp: mass weights must be positive");
    }
  }

  // Substitute s_i = a_i t_i: min sum b_i s_i + theta sum |s_i| with
  // sum s_i = 0, L_i <= s_i <= U_i where b_i = c_i/a_i. The Lagrangian
  // minimizer for multiplier nu is s_i = U_i for nu < -theta - b_i,
  // s_i = L_i for nu > theta - b_i, and 0 in between; scan the sorted
  // breakpoints until the aggregate sum crosses zero.
  struct Event {
    double nu;
    Eigen::Index idx;
    bool to_lower;  // false: U -> 0, true: 0 -> L
  };
  Eigen::VectorXd b(n), L(n), U(n), s(n);
  std::vector<Event> events;
  events.reserve(2 * static_cast<std::size_t>(n));
  double aggregate = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    b[i] = lp.linear_cost[i] / lp.mass_weights[i];
    L[i] = lp.mass_weights[i] * lp.lower[i];
    U[i] = lp.mass_weights[i] * lp.upper[i];
    s[i] = U[i];
    aggregate += U[i];
    events.push_back({-lp.l1_weight - b[i], i, false});
    events.push_back({lp.l1_weight - b[i], i, true});
  }
  std::sort(events.begin(), events.end(), [](const Event& a, const Event& e) {
    if (a.nu != e.nu) return a.nu < e.nu;
    if (a.idx != e.idx) return a.idx < e.idx;
    return a.to_lower < e.to_lower;
  });

  for (const Event& e : events) {
    if (aggregate <= 0.0) break;
    const double old = s[e.idx];
    const double target = e.to_lower ? L[e.idx] : 0.0;
    const double next = aggregate - old + target;
    if (next <= 0.0) {
      s[e.idx] = old - aggregate;  // split this coordinate fractionally
      aggregate = 0.0;
      break;
    }
    s[e.idx] = target;
    aggregate = next;
  }

  LpSolution sol;
  sol.t = s.cwiseQuotient(lp.mass_weights);
  sol.objective = lp.linear_cost.dot(sol.t) +
                  lp.l1_weight * lp.mass_weights.dot(sol.t.cwiseAbs());
  if (sol.objective >= 0.0) {
    // t = 0 is feasible with objective 0; prefer it exactly whenever the
    // scan cannot do better (guards against roundoff drift in the splits).
    sol.t.setZero();
    sol.objective = 0.0;
  }
  return sol;
}

double bisect_root(const std::function<double(double)>& f, double lo,
                   double hi, double tol) {
  double flo = f(lo);
  double fhi = f(hi);
  if (std::abs(flo) <= tol) return lo;
  if (std::abs(fhi) <= tol) return hi;
  if (flo * fhi > 0.0) {
    throw std::runtime_error("bisect_root: no sign change on bracket");
  }
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (std::abs(fm) <= tol ||
        hi - lo < std::numeric_limits<double>::epsilon() *
                      std::max(1.0, std::abs(mid))) {
      return mid;
    }
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace rockrisk
