#include <doctest.h>

#include <cmath>
#include <vector>

#include "core/optimize.hpp"

using namespace mlrank;

namespace {

Objective quadratic(std::vector<double> target) {
  return [target = std::move(target)](std::span<const double> x,
                                      std::span<double> grad) {
    double value = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double d = x[i] - target[i];
      value += d * d;
      grad[i] = 2.0 * d;
    }
    return value;
  };
}

Objective rosenbrock() {
  return [](std::span<const double> x, std::span<double> grad) {
    const double a = x[0], b = x[1];
    const double value =
        (1.0 - a) * (1.0 - a) + 100.0 * (b - a * a) * (b - a * a);
    grad[0] = -2.0 * (1.0 - a) - 400.0 * a * (b - a * a);
    grad[1] = 200.0 * (b - a * a);
    return value;
  };
}

}  // namespace

TEST_CASE("quadratic bowl converges to its center") {
  const MinimizeResult r = minimize(quadratic({3.0, -2.0, 0.5}),
                                    {0.0, 0.0, 0.0});
  REQUIRE(r.converged);
  CHECK(std::fabs(r.x[0] - 3.0) < 1e-6);
  CHECK(std::fabs(r.x[1] + 2.0) < 1e-6);
  CHECK(std::fabs(r.x[2] - 0.5) < 1e-6);
  CHECK(r.value < 1e-10);
}

TEST_CASE("curved valley converges from the standard start") {
  const MinimizeResult r = minimize(rosenbrock(), {-1.2, 1.0});
  REQUIRE(r.converged);
  CHECK(std::fabs(r.x[0] - 1.0) < 1e-5);
  CHECK(std::fabs(r.x[1] - 1.0) < 1e-5);
}

TEST_CASE("reported gradient norm honors the tolerance") {
  MinimizeOptions options;
  options.gradient_tolerance = 1e-10;
  const MinimizeResult r = minimize(quadratic({1.0, 1.0}), {5.0, -5.0},
                                    options);
  REQUIRE(r.converged);
  CHECK(r.gradient_inf_norm < 1e-10);
}

TEST_CASE("iteration cap stops the loop without convergence") {
  MinimizeOptions options;
  options.max_iterations = 2;
  options.gradient_tolerance = 1e-14;
  const MinimizeResult r = minimize(rosenbrock(), {-1.2, 1.0}, options);
  CHECK_FALSE(r.converged);
  CHECK(r.iterations <= 2);
}

TEST_CASE("minimization is deterministic") {
  const MinimizeResult a = minimize(rosenbrock(), {-1.2, 1.0});
  const MinimizeResult b = minimize(rosenbrock(), {-1.2, 1.0});
  CHECK(a.x == b.x);
  CHECK(a.value == b.value);
  CHECK(a.iterations == b.iterations);
}

TEST_CASE("line search backs off non-finite trial values") {
  // Steep exponential: the first trial steps far into overflow and must be
  // halved back until the value is finite and decreasing.
  const Objective f = [](std::span<const double> x, std::span<double> grad) {
    const double value = std::exp(x[0]) - x[0];
    grad[0] = std::exp(x[0]) - 1.0;
    return value;
  };
  const MinimizeResult r = minimize(f, {100.0});
  REQUIRE(r.converged);
  CHECK(std::fabs(r.x[0]) < 1e-6);
}

TEST_CASE("already-optimal start returns immediately") {
  const MinimizeResult r = minimize(quadratic({2.0}), {2.0});
  REQUIRE(r.converged);
  CHECK(r.iterations == 0);
  CHECK(r.x[0] == 2.0);
}
