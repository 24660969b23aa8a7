#ifndef MLRANK_CORE_OPTIMIZE_HPP_
#define MLRANK_CORE_OPTIMIZE_HPP_

#include <functional>
#include <span>
#include <vector>

namespace mlrank {

// Objective callback: writes the gradient into `grad` (same length as `x`)
// and returns the objective value.
using Objective =
    std::function<double(std::span<const double> x, std::span<double> grad)>;

struct MinimizeOptions {
  double gradient_tolerance = 1e-8;  // infinity norm
  long max_iterations = 100000;
  int history = 10;  // L-BFGS memory
};

struct MinimizeResult {
  std::vector<double> x;
  double value = 0.0;
  double gradient_inf_norm = 0.0;
  long iterations = 0;
  bool converged = false;          // gradient tolerance reached
  bool line_search_failed = false; // no Armijo decrease found
};

// Deterministic full-batch minimizer for smooth convex objectives: L-BFGS
// directions with Armijo backtracking (halving). Stops when the gradient
// infinity norm drops below the tolerance or the iteration cap is hit.
MinimizeResult minimize(const Objective& objective, std::vector<double> x0,
                        const MinimizeOptions& options = {});

}  // namespace mlrank

#endif  // MLRANK_CORE_OPTIMIZE_HPP_
