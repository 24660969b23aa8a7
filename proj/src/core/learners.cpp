#include "core/learners.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace mlrank {

namespace {

// Sample indices sorted ascending by each feature, ties broken by index so
// the scan order is deterministic.
template <typename ValueFn>
std::vector<std::vector<int>> sort_orders(int n, int d, const ValueFn& value) {
  std::vector<std::vector<int>> orders(d);
  for (int f = 0; f < d; ++f) {
    std::vector<int>& order = orders[f];
    order.resize(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      const double va = value(a, f);
      const double vb = value(b, f);
      if (va != vb) return va < vb;
      return a < b;
    });
  }
  return orders;
}

// Threshold strictly separating adjacent distinct values a < b. Falls back
// to a itself when the midpoint rounds up to b.
double midpoint_threshold(double a, double b) {
  const double mid = a + 0.5 * (b - a);
  return mid < b ? mid : a;
}

struct WeightedSplit {
  int feature = 0;
  double threshold = 0.0;
  double left_pos = 0.0;
  double left_neg = 0.0;
  double right_pos = 0.0;
  double right_neg = 0.0;
  double error = 0.0;
};

// Stump minimizing the weighted 0-1 error over all (feature, midpoint)
// candidates plus the everything-right constant stump. First best in scan
// order wins ties.
template <typename ValueFn>
WeightedSplit best_weighted_split(int n, int d, const ValueFn& value,
                                  const std::vector<std::vector<int>>& orders,
                                  const std::vector<double>& mass,
                                  const std::vector<int>& sign) {
  double total_pos = 0.0;
  double total_neg = 0.0;
  for (int i = 0; i < n; ++i) (sign[i] > 0 ? total_pos : total_neg) += mass[i];

  WeightedSplit best;
  bool have_best = false;
  auto consider = [&](int f, double threshold, double lp, double ln) {
    const double rp = std::max(0.0, total_pos - lp);
    const double rn = std::max(0.0, total_neg - ln);
    const double error = std::min(lp, ln) + std::min(rp, rn);
    if (!have_best || error < best.error) {
      best = {f, threshold, lp, ln, rp, rn, error};
      have_best = true;
    }
  };

  for (int f = 0; f < d; ++f) {
    const std::vector<int>& order = orders[f];
    const double below = std::nextafter(value(order[0], f),
                                        -std::numeric_limits<double>::infinity());
    if (std::isfinite(below)) consider(f, below, 0.0, 0.0);
    double lp = 0.0;
    double ln = 0.0;
    for (int k = 0; k + 1 < n; ++k) {
      const int idx = order[k];
      (sign[idx] > 0 ? lp : ln) += mass[idx];
      const double va = value(idx, f);
      const double vb = value(order[k + 1], f);
      if (va < vb) consider(f, midpoint_threshold(va, vb), lp, ln);
    }
  }
  return best;
}

struct LeastSquaresSplit {
  int feature = 0;
  double threshold = 0.0;
  double gain = 0.0;
};

// Stump best fitting the targets in the least-squares sense: maximizes the
// explained sum of squares over the same candidate set as above.
template <typename ValueFn>
LeastSquaresSplit best_ls_split(int n, int d, const ValueFn& value,
                                const std::vector<std::vector<int>>& orders,
                                const std::vector<double>& target) {
  double total = 0.0;
  for (int i = 0; i < n; ++i) total += target[i];

  LeastSquaresSplit best;
  bool have_best = false;
  auto consider = [&](int f, double threshold, double ls, long lc) {
    const double rs = total - ls;
    const long rc = n - lc;
    double gain = 0.0;
    if (lc > 0) gain += ls * ls / static_cast<double>(lc);
    if (rc > 0) gain += rs * rs / static_cast<double>(rc);
    if (!have_best || gain > best.gain) {
      best = {f, threshold, gain};
      have_best = true;
    }
  };

  for (int f = 0; f < d; ++f) {
    const std::vector<int>& order = orders[f];
    const double below = std::nextafter(value(order[0], f),
                                        -std::numeric_limits<double>::infinity());
    if (std::isfinite(below)) consider(f, below, 0.0, 0);
    double ls = 0.0;
    long lc = 0;
    for (int k = 0; k + 1 < n; ++k) {
      const int idx = order[k];
      ls += target[idx];
      ++lc;
      const double va = value(idx, f);
      const double vb = value(order[k + 1], f);
      if (va < vb) consider(f, midpoint_threshold(va, vb), ls, lc);
    }
  }
  return best;
}

double smoothed_half_log_odds(double pos, double neg, double eps) {
  if (pos <= 0.0 && neg <= 0.0) return 0.0;
  return 0.5 * std::log((pos + eps) / (neg + eps));
}

// Overflow-tolerant surrogate terms for training objectives: the exponential
// branch returns +inf instead of throwing so a too-long line-search step is
// simply rejected.
double phi_term(PairwiseSurrogate phi, double t) {
  return phi == PairwiseSurrogate::kExponential ? std::exp(-t)
                                                : log1p_exp_neg(t);
}

double phi_term_derivative(PairwiseSurrogate phi, double t) {
  return phi == PairwiseSurrogate::kExponential ? -std::exp(-t)
                                                : logistic_loss_derivative(t);
}

int checked_count(std::size_t n, const char* what) {
  require(n > 0, ErrorCode::kInvalidArgument, std::string(what) + " is empty");
  require(n <= static_cast<std::size_t>(std::numeric_limits<int>::max()),
          ErrorCode::kInvalidArgument, std::string(what) + " is too large");
  return static_cast<int>(n);
}

}  // namespace

double StumpEnsemble::predict(std::span<const double> x) const {
  require(static_cast<int>(x.size()) == dimension, ErrorCode::kDimensionMismatch,
          "feature length does not match ensemble dimension");
  double sum = 0.0;
  for (const Stump& stump : stumps) sum += stump.value(x);
  return sum;
}

double LinearModel::predict(std::span<const double> x) const {
  require(x.size() == coefficients.size(), ErrorCode::kDimensionMismatch,
          "feature length does not match model dimension");
  double sum = intercept;
  for (std::size_t j = 0; j < x.size(); ++j) sum += coefficients[j] * x[j];
  return sum;
}

Standardizer Standardizer::fit(const MultilabelDataset& data) {
  data.validate();
  const std::size_t n = data.size();
  require(n > 0, ErrorCode::kInvalidArgument, "cannot standardize empty data");
  Standardizer result;
  result.mean.assign(data.d, 0.0);
  result.scale.assign(data.d, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::span<const double> x = data.features_of(i);
    for (int j = 0; j < data.d; ++j) result.mean[j] += x[j];
  }
  for (double& v : result.mean) v /= static_cast<double>(n);
  std::vector<double> var(data.d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::span<const double> x = data.features_of(i);
    for (int j = 0; j < data.d; ++j) {
      const double c = x[j] - result.mean[j];
      var[j] += c * c;
    }
  }
  for (int j = 0; j < data.d; ++j) {
    const double v = var[j] / static_cast<double>(n);
    if (v > 0.0) result.scale[j] = 1.0 / std::sqrt(v);
  }
  return result;
}

std::vector<double> Standardizer::transformed(std::span<const double> x) const {
  require(x.size() == mean.size(), ErrorCode::kDimensionMismatch,
          "feature length does not match standardizer");
  std::vector<double> out(x.size());
  for (std::size_t j = 0; j < x.size(); ++j)
    out[j] = (x[j] - mean[j]) * scale[j];
  return out;
}

MultilabelDataset Standardizer::transformed(const MultilabelDataset& data) const {
  require(static_cast<std::size_t>(data.d) == mean.size(),
          ErrorCode::kDimensionMismatch,
          "dataset dimension does not match standardizer");
  MultilabelDataset out = data;
  const std::size_t n = data.size();
  for (std::size_t i = 0; i < n; ++i) {
    double* row = out.features.data() + i * static_cast<std::size_t>(data.d);
    for (int j = 0; j < data.d; ++j) row[j] = (row[j] - mean[j]) * scale[j];
  }
  return out;
}

BoostResult train_ada_stumps(std::span<const WeightedBinarySample> samples,
                             int rounds) {
  require(rounds >= 1, ErrorCode::kInvalidArgument,
          "boosting needs at least one round");
  const int n = checked_count(samples.size(), "sample set");
  const int d = checked_count(samples[0].features.size(), "feature vector");

  double total_weight = 0.0;
  for (const WeightedBinarySample& s : samples) {
    require(static_cast<int>(s.features.size()) == d,
            ErrorCode::kDimensionMismatch, "inconsistent feature lengths");
    require(std::isfinite(s.weight) && s.weight >= 0.0,
            ErrorCode::kInvalidArgument, "sample weights must be finite and >= 0");
    total_weight += s.weight;
  }
  require(total_weight > 0.0, ErrorCode::kInvalidArgument,
          "all sample weights are zero");

  const double eps = 1.0 / (2.0 * n);
  std::vector<double> mass(n);
  std::vector<double> margin(n, 0.0);
  std::vector<int> sign(n);
  for (int i = 0; i < n; ++i) {
    mass[i] = samples[i].weight / total_weight;
    sign[i] = sign_value(samples[i].label);
  }

  auto value = [&samples](int i, int f) { return samples[i].features[f]; };
  const std::vector<std::vector<int>> orders = sort_orders(n, d, value);

  BoostResult result;
  result.ensemble.dimension = d;
  result.ensemble.stumps.reserve(rounds);
  result.loss_trace.reserve(rounds);

  for (int t = 0; t < rounds; ++t) {
    const WeightedSplit split =
        best_weighted_split(n, d, value, orders, mass, sign);
    const Stump stump{split.feature, split.threshold,
                      smoothed_half_log_odds(split.left_pos, split.left_neg, eps),
                      smoothed_half_log_odds(split.right_pos, split.right_neg, eps)};
    result.ensemble.stumps.push_back(stump);

    double loss = 0.0;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      margin[i] += sign[i] * stump.value(samples[i].features);
      const double u = samples[i].weight * std::exp(-margin[i]);
      loss += u;
      mass[i] = u;
      sum += u;
    }
    if (sum > 0.0)
      for (double& v : mass) v /= sum;
    result.loss_trace.push_back(loss);
  }
  return result;
}

Objective make_logreg_objective(std::span<const WeightedBinarySample> samples,
                                double lambda) {
  require(lambda >= 0.0, ErrorCode::kInvalidArgument, "lambda must be >= 0");
  checked_count(samples.size(), "sample set");
  const int d = checked_count(samples[0].features.size(), "feature vector");
  double total_weight = 0.0;
  for (const WeightedBinarySample& s : samples) {
    require(static_cast<int>(s.features.size()) == d,
            ErrorCode::kDimensionMismatch, "inconsistent feature lengths");
    require(std::isfinite(s.weight) && s.weight >= 0.0,
            ErrorCode::kInvalidArgument, "sample weights must be finite and >= 0");
    total_weight += s.weight;
  }
  require(total_weight > 0.0, ErrorCode::kInvalidArgument,
          "all sample weights are zero");
  const double inv_total = 1.0 / total_weight;
  std::vector<WeightedBinarySample> local(samples.begin(), samples.end());

  return [local = std::move(local), lambda, inv_total, d](
             std::span<const double> x, std::span<double> grad) -> double {
    double value = 0.0;
    for (int j = 0; j < d; ++j) {
      value += lambda * x[j] * x[j];
      grad[j] = 2.0 * lambda * x[j];
    }
    grad[d] = 0.0;
    for (const WeightedBinarySample& s : local) {
      if (s.weight == 0.0) continue;
      double score = x[d];
      for (int j = 0; j < d; ++j) score += x[j] * s.features[j];
      const double t = sign_value(s.label) * score;
      value += s.weight * log1p_exp_neg(t);
      const double g =
          s.weight * sign_value(s.label) * logistic_loss_derivative(t);
      for (int j = 0; j < d; ++j) grad[j] += g * s.features[j];
      grad[d] += g;
    }
    for (int j = 0; j <= d; ++j) grad[j] *= inv_total;
    return value * inv_total;
  };
}

LinearModel train_logreg(std::span<const WeightedBinarySample> samples,
                         const LogregOptions& options) {
  const int d = checked_count(samples[0].features.size(), "feature vector");
  MinimizeOptions opts;
  opts.gradient_tolerance = options.tolerance;
  opts.max_iterations = options.max_iterations;
  const MinimizeResult fit = minimize(
      make_logreg_objective(samples, options.lambda),
      std::vector<double>(d + 1, 0.0), opts);
  if (!fit.converged)
    fail(ErrorCode::kNotConverged,
         "logistic regression stopped at gradient inf-norm " +
             std::to_string(fit.gradient_inf_norm) + " after " +
             std::to_string(fit.iterations) + " iterations");
  LinearModel model;
  model.coefficients.assign(fit.x.begin(), fit.x.begin() + d);
  model.intercept = fit.x[d];
  return model;
}

ScoreVector PairwiseLinearModel::predict_scores(std::span<const double> x) const {
  std::vector<double> input;
  std::span<const double> features = x;
  if (standardizer) {
    input = standardizer->transformed(x);
    features = input;
  }
  std::vector<double> scores(per_label.size());
  for (std::size_t i = 0; i < per_label.size(); ++i)
    scores[i] = per_label[i].predict(features);
  return ScoreVector(std::move(scores));
}

PairwiseLinearResult train_pairwise_linear(const MultilabelDataset& data,
                                           const WeightSpec& spec,
                                           const PairwiseLinearOptions& options) {
  data.validate();
  const int n = checked_count(data.size(), "dataset");
  require(options.max_iterations >= 1, ErrorCode::kInvalidArgument,
          "iteration cap must be >= 1");
  const int m = data.m;
  const int d = data.d;

  std::optional<Standardizer> standardizer;
  MultilabelDataset transformed_storage;
  const MultilabelDataset* train = &data;
  if (options.standardize) {
    standardizer = Standardizer::fit(data);
    transformed_storage = standardizer->transformed(data);
    train = &transformed_storage;
  }

  struct Instance {
    int index;
    double weight;
    std::vector<int> relevant;
    std::vector<int> irrelevant;
  };
  std::vector<Instance> active;
  for (int inst = 0; inst < n; ++inst) {
    const LabelVector y = train->labels_of(inst);
    const double w = spec.weight(y);
    if (w == 0.0) continue;
    Instance entry{inst, w, {}, {}};
    for (int i = 0; i < m; ++i)
      (y[i] ? entry.relevant : entry.irrelevant).push_back(i);
    if (entry.relevant.empty() || entry.irrelevant.empty()) continue;
    active.push_back(std::move(entry));
  }

  const double inv_n = 1.0 / static_cast<double>(n);
  const PairwiseSurrogate phi = options.phi;
  const int block = d + 1;

  Objective objective = [&](std::span<const double> x,
                            std::span<double> grad) -> double {
    std::fill(grad.begin(), grad.end(), 0.0);
    double value = 0.0;
    std::vector<double> h(m);
    std::vector<double> s(m);
    for (const Instance& entry : active) {
      const std::span<const double> features = train->features_of(entry.index);
      for (int i = 0; i < m; ++i) {
        double score = x[i * block + d];
        const double* coef = x.data() + i * block;
        for (int j = 0; j < d; ++j) score += coef[j] * features[j];
        h[i] = score;
      }
      std::fill(s.begin(), s.end(), 0.0);
      for (int i : entry.relevant) {
        for (int j : entry.irrelevant) {
          const double t = h[i] - h[j];
          value += entry.weight * phi_term(phi, t);
          const double g = entry.weight * phi_term_derivative(phi, t);
          s[i] += g;
          s[j] -= g;
        }
      }
      for (int i = 0; i < m; ++i) {
        if (s[i] == 0.0) continue;
        double* out = grad.data() + i * block;
        for (int j = 0; j < d; ++j) out[j] += s[i] * features[j];
        out[d] += s[i];
      }
    }
    for (double& g : grad) g *= inv_n;
    return value * inv_n;
  };

  MinimizeOptions opts;
  opts.gradient_tolerance = options.tolerance;
  opts.max_iterations = options.max_iterations;
  const MinimizeResult fit =
      minimize(objective, std::vector<double>(m * block, 0.0), opts);

  PairwiseLinearResult result;
  result.model.per_label.resize(m);
  for (int i = 0; i < m; ++i) {
    LinearModel& lm = result.model.per_label[i];
    lm.coefficients.assign(fit.x.begin() + i * block,
                           fit.x.begin() + i * block + d);
    lm.intercept = fit.x[i * block + d];
  }
  result.model.standardizer = std::move(standardizer);
  result.objective = fit.value;
  result.iterations = fit.iterations;
  result.converged = fit.converged;
  return result;
}

ScoreVector PairwiseStumpModel::predict_scores(std::span<const double> x) const {
  std::vector<double> scores(per_label.size());
  for (std::size_t i = 0; i < per_label.size(); ++i)
    scores[i] = per_label[i].predict(x);
  return ScoreVector(std::move(scores));
}

PairwiseStumpModel PairwiseStumpModel::prefix(int rounds) const {
  require(rounds >= 0, ErrorCode::kInvalidArgument, "prefix must be >= 0");
  const int m = static_cast<int>(per_label.size());
  PairwiseStumpModel out = *this;
  for (int i = 0; i < m; ++i) {
    const std::size_t keep = static_cast<std::size_t>(
        rounds / m + (i < rounds % m ? 1 : 0));
    if (keep < out.per_label[i].stumps.size())
      out.per_label[i].stumps.resize(keep);
  }
  return out;
}

PairwiseStumpResult train_pairwise_stumps(const MultilabelDataset& data,
                                          const WeightSpec& spec,
                                          int total_stumps) {
  data.validate();
  const int n = checked_count(data.size(), "dataset");
  const int m = data.m;
  const int d = data.d;
  require(total_stumps >= m, ErrorCode::kInvalidArgument,
          "need at least one round per label");

  std::vector<double> weight(n);
  double pair_mass = 0.0;
  for (int inst = 0; inst < n; ++inst) {
    const LabelVector y = data.labels_of(inst);
    weight[inst] = spec.weight(y);
    const int s = y.sum();
    pair_mass += weight[inst] * static_cast<double>(s) * (m - s);
  }
  require(pair_mass > 0.0, ErrorCode::kInvalidArgument,
          "no weighted label pair to fit");

  auto value = [&data](int i, int f) { return data.features_of(i)[f]; };
  const std::vector<std::vector<int>> orders = sort_orders(n, d, value);

  std::vector<double> scores(static_cast<std::size_t>(n) * m, 0.0);
  auto score_row = [&scores, m](int inst) { return scores.data() + inst * m; };

  auto total_loss = [&]() {
    double loss = 0.0;
    for (int inst = 0; inst < n; ++inst) {
      if (weight[inst] == 0.0) continue;
      const double* h = score_row(inst);
      for (int i = 0; i < m; ++i) {
        if (!data.label_bit(inst, i)) continue;
        for (int j = 0; j < m; ++j) {
          if (data.label_bit(inst, j)) continue;
          loss += weight[inst] * std::exp(h[j] - h[i]);
        }
      }
    }
    return loss;
  };

  PairwiseStumpResult result;
  result.model.per_label.assign(m, StumpEnsemble{d, {}});
  result.loss_trace.reserve(total_stumps);

  std::vector<double> pull_up(n);    // weighted pressure to raise the label
  std::vector<double> pull_down(n);  // weighted pressure A_n vs B_n
  std::vector<double> target(n);

  for (int t = 0; t < total_stumps; ++t) {
    const int label = t % m;
    for (int inst = 0; inst < n; ++inst) {
      pull_up[inst] = 0.0;
      pull_down[inst] = 0.0;
      if (weight[inst] == 0.0) {
        target[inst] = 0.0;
        continue;
      }
      const double* h = score_row(inst);
      if (data.label_bit(inst, label)) {
        double sum = 0.0;
        for (int j = 0; j < m; ++j)
          if (!data.label_bit(inst, j)) sum += std::exp(h[j] - h[label]);
        pull_up[inst] = weight[inst] * sum;
      } else {
        double sum = 0.0;
        for (int j = 0; j < m; ++j)
          if (data.label_bit(inst, j)) sum += std::exp(h[label] - h[j]);
        pull_down[inst] = weight[inst] * sum;
      }
      target[inst] = pull_up[inst] - pull_down[inst];
    }

    const LeastSquaresSplit split = best_ls_split(n, d, value, orders, target);

    double left_up = 0.0, left_down = 0.0, right_up = 0.0, right_down = 0.0;
    for (int inst = 0; inst < n; ++inst) {
      const bool left = data.features_of(inst)[split.feature] <= split.threshold;
      (left ? left_up : right_up) += pull_up[inst];
      (left ? left_down : right_down) += pull_down[inst];
    }
    // Smoothing proportional to the leaf's pair mass keeps the step between
    // 0 and the unsmoothed optimum, so the loss cannot increase.
    const double eps_left = (left_up + left_down) / (2.0 * n);
    const double eps_right = (right_up + right_down) / (2.0 * n);
    const Stump stump{split.feature, split.threshold,
                      smoothed_half_log_odds(left_up, left_down, eps_left),
                      smoothed_half_log_odds(right_up, right_down, eps_right)};
    result.model.per_label[label].stumps.push_back(stump);

    for (int inst = 0; inst < n; ++inst)
      score_row(inst)[label] += stump.value(data.features_of(inst));
    result.loss_trace.push_back(total_loss());
  }
  return result;
}

}  // namespace mlrank
