#include "core/loss.hpp"

namespace mlrank {

namespace {

void check_lengths(const LabelVector& y, const ScoreVector& h) {
  require(y.size() == h.size(), ErrorCode::kDimensionMismatch,
          "label/score length mismatch");
}

}  // namespace

void ScoreVector::validate() const {
  for (double s : scores) {
    if (!std::isfinite(s))
      fail(ErrorCode::kInvalidArgument, "score vector entries must be finite");
  }
}

double rank_loss(const LabelVector& y, const ScoreVector& h,
                 const WeightSpec& spec) {
  check_lengths(y, h);
  const double w = spec.weight(y);
  const std::size_t m = y.size();
  double pairs = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (!y[i]) continue;
    for (std::size_t j = 0; j < m; ++j) {
      if (y[j]) continue;
      // relevant i vs irrelevant j
      if (h[i] < h[j])
        pairs += 1.0;
      else if (h[i] == h[j])
        pairs += 0.5;
    }
  }
  return w * pairs;
}

double univariate_surrogate_loss(UnivariateKind kind, const LabelVector& y,
                                 const ScoreVector& h, const WeightSpec& spec,
                                 double margin_cap) {
  check_lengths(y, h);
  const double w = spec.weight(y);
  double total = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double margin = (y[i] ? 1.0 : -1.0) * h[i];
    total += kind == UnivariateKind::kExp ? exp_loss(margin, margin_cap)
                                          : log1p_exp_neg(margin);
  }
  return w * total;
}

std::vector<double> univariate_surrogate_gradient(
    UnivariateKind kind, const LabelVector& y, const ScoreVector& h,
    const WeightSpec& spec, double margin_cap) {
  check_lengths(y, h);
  const double w = spec.weight(y);
  std::vector<double> grad(y.size(), 0.0);
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double sign = y[i] ? 1.0 : -1.0;
    const double margin = sign * h[i];
    const double dmargin = kind == UnivariateKind::kExp
                               ? -exp_loss(margin, margin_cap)
                               : logistic_loss_derivative(margin);
    grad[i] = w * sign * dmargin;
  }
  return grad;
}

double pairwise_surrogate_loss(PairwiseSurrogate phi, const LabelVector& y,
                               const ScoreVector& h, const WeightSpec& spec,
                               double margin_cap) {
  check_lengths(y, h);
  const double w = spec.weight(y);
  const std::size_t m = y.size();
  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (!y[i]) continue;
    for (std::size_t j = 0; j < m; ++j) {
      if (y[j]) continue;
      total += pairwise_phi(phi, h[i] - h[j], margin_cap);
    }
  }
  return w * total;
}

std::vector<double> pairwise_surrogate_gradient(
    PairwiseSurrogate phi, const LabelVector& y, const ScoreVector& h,
    const WeightSpec& spec, double margin_cap) {
  check_lengths(y, h);
  const double w = spec.weight(y);
  const std::size_t m = y.size();
  std::vector<double> grad(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    if (!y[i]) continue;
    for (std::size_t j = 0; j < m; ++j) {
      if (y[j]) continue;
      const double d = pairwise_phi_derivative(phi, h[i] - h[j], margin_cap);
      grad[i] += w * d;
      grad[j] -= w * d;
    }
  }
  return grad;
}

double bipartite_rank_loss(SignedLabel y1, SignedLabel y2, double h1,
                           double h2) {
  const int a = sign_value(y1);
  const int b = sign_value(y2);
  if (a == b) return 0.0;
  if (h1 == h2) return 0.5;
  if (a > b) return h1 < h2 ? 1.0 : 0.0;
  return h1 > h2 ? 1.0 : 0.0;
}

}  // namespace mlrank
