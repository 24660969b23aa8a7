#include "core/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace mlrank {

namespace {

double inf_norm(std::span<const double> v) {
  double n = 0.0;
  for (double x : v) n = std::max(n, std::abs(x));
  return n;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

MinimizeResult minimize(const Objective& objective, std::vector<double> x0,
                        const MinimizeOptions& options) {
  const std::size_t n = x0.size();
  MinimizeResult result;
  result.x = std::move(x0);

  std::vector<double> grad(n, 0.0);
  double value = objective(result.x, grad);

  struct Pair {
    std::vector<double> s, y;
    double rho;
  };
  std::deque<Pair> history;

  std::vector<double> direction(n), x_new(n), grad_new(n);
  const double armijo_c = 1e-4;

  for (long iter = 0; iter < options.max_iterations; ++iter) {
    const double gnorm = inf_norm(grad);
    if (gnorm < options.gradient_tolerance) {
      result.converged = true;
      break;
    }

    // Two-loop recursion.
    for (std::size_t i = 0; i < n; ++i) direction[i] = -grad[i];
    std::vector<double> alphas(history.size());
    for (std::size_t k = history.size(); k-- > 0;) {
      const Pair& p = history[k];
      alphas[k] = p.rho * dot(p.s, direction);
      for (std::size_t i = 0; i < n; ++i) direction[i] -= alphas[k] * p.y[i];
    }
    if (!history.empty()) {
      const Pair& last = history.back();
      const double yy = dot(last.y, last.y);
      if (yy > 0.0) {
        const double gamma = 1.0 / (last.rho * yy);
        for (double& d : direction) d *= gamma;
      }
    }
    for (std::size_t k = 0; k < history.size(); ++k) {
      const Pair& p = history[k];
      const double beta = p.rho * dot(p.y, direction);
      for (std::size_t i = 0; i < n; ++i)
        direction[i] += (alphas[k] - beta) * p.s[i];
    }

    double slope = dot(grad, direction);
    if (!(slope < 0.0)) {
      // Not a descent direction (stale curvature); fall back to -grad.
      for (std::size_t i = 0; i < n; ++i) direction[i] = -grad[i];
      slope = -dot(grad, grad);
      history.clear();
    }

    double step = history.empty() ? 1.0 / std::max(1.0, gnorm) : 1.0;
    double value_new = 0.0;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      for (std::size_t i = 0; i < n; ++i)
        x_new[i] = result.x[i] + step * direction[i];
      value_new = objective(x_new, grad_new);
      if (std::isfinite(value_new) && value_new <= value + armijo_c * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      result.line_search_failed = true;
      break;
    }

    Pair pair;
    pair.s.resize(n);
    pair.y.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      pair.s[i] = x_new[i] - result.x[i];
      pair.y[i] = grad_new[i] - grad[i];
    }
    const double sy = dot(pair.s, pair.y);
    if (sy > 1e-12 * inf_norm(pair.s) * inf_norm(pair.y)) {
      pair.rho = 1.0 / sy;
      history.push_back(std::move(pair));
      if (static_cast<int>(history.size()) > options.history)
        history.pop_front();
    }

    result.x.swap(x_new);
    grad.swap(grad_new);
    value = value_new;
    result.iterations = iter + 1;
  }

  result.value = value;
  result.gradient_inf_norm = inf_norm(grad);
  if (result.gradient_inf_norm < options.gradient_tolerance)
    result.converged = true;
  return result;
}

}  // namespace mlrank
