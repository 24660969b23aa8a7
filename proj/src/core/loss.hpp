#ifndef MLRANK_CORE_LOSS_HPP_
#define MLRANK_CORE_LOSS_HPP_

#include <cmath>

#include "core/types.hpp"
#include "core/weights.hpp"

namespace mlrank {

enum class UnivariateKind { kExp, kLog };

// phi in the pairwise surrogate sum over misorderable label pairs:
// exponential phi(t) = e^{-t}, logistic phi(t) = log(1 + e^{-t}).
enum class PairwiseSurrogate { kExponential, kLogistic };

// Margin cap for the exponential loss; e^{700} is the edge of double range.
inline constexpr double kDefaultMarginCap = 700.0;

// log(1 + e^{-t}) evaluated without overflow for any t.
inline double log1p_exp_neg(double t) {
  if (t >= 0.0) return std::log1p(std::exp(-t));
  return -t + std::log1p(std::exp(t));
}

// d/dt log(1 + e^{-t}) = -sigmoid(-t), in a form stable for large |t|.
inline double logistic_loss_derivative(double t) {
  if (t >= 0.0) {
    const double e = std::exp(-t);
    return -e / (1.0 + e);
  }
  return -1.0 / (1.0 + std::exp(t));
}

// e^{-t} with the configured overflow cap.
inline double exp_loss(double t, double margin_cap = kDefaultMarginCap) {
  if (-t > margin_cap)
    fail(ErrorCode::kNumeric, "exponential loss overflow: margin exceeds cap");
  return std::exp(-t);
}

inline double pairwise_phi(PairwiseSurrogate phi, double t,
                           double margin_cap = kDefaultMarginCap) {
  return phi == PairwiseSurrogate::kExponential ? exp_loss(t, margin_cap)
                                                : log1p_exp_neg(t);
}

inline double pairwise_phi_derivative(PairwiseSurrogate phi, double t,
                                      double margin_cap = kDefaultMarginCap) {
  return phi == PairwiseSurrogate::kExponential ? -exp_loss(t, margin_cap)
                                                : logistic_loss_derivative(t);
}

// Rank loss (weighted count of misordered relevant/irrelevant pairs, ties
// costing 1/2). Tie detection is exact comparison of the stored doubles.
double rank_loss(const LabelVector& y, const ScoreVector& h,
                 const WeightSpec& spec);

// w(y) * sum_i l(y_i~, h_i) with labels mapped 0 -> -1, 1 -> +1.
double univariate_surrogate_loss(UnivariateKind kind, const LabelVector& y,
                                 const ScoreVector& h, const WeightSpec& spec,
                                 double margin_cap = kDefaultMarginCap);

// Gradient of univariate_surrogate_loss with respect to h.
std::vector<double> univariate_surrogate_gradient(
    UnivariateKind kind, const LabelVector& y, const ScoreVector& h,
    const WeightSpec& spec, double margin_cap = kDefaultMarginCap);

// w(y) * sum_{(i,j): y_i > y_j} phi(h_i - h_j).
double pairwise_surrogate_loss(PairwiseSurrogate phi, const LabelVector& y,
                               const ScoreVector& h, const WeightSpec& spec,
                               double margin_cap = kDefaultMarginCap);

// Gradient of pairwise_surrogate_loss with respect to h.
std::vector<double> pairwise_surrogate_gradient(
    PairwiseSurrogate phi, const LabelVector& y, const ScoreVector& h,
    const WeightSpec& spec, double margin_cap = kDefaultMarginCap);

// Non-normalized bipartite rank loss on a single pair of scored examples.
double bipartite_rank_loss(SignedLabel y1, SignedLabel y2, double h1, double h2);

}  // namespace mlrank

#endif  // MLRANK_CORE_LOSS_HPP_
