#ifndef MLRANK_CORE_LEARNERS_HPP_
#define MLRANK_CORE_LEARNERS_HPP_

#include <optional>
#include <span>
#include <vector>

#include "core/dataio.hpp"
#include "core/loss.hpp"
#include "core/optimize.hpp"
#include "core/types.hpp"
#include "core/weights.hpp"

namespace mlrank {

// One weighted instance of a binary problem. `features` views storage owned
// elsewhere (usually a dataset); keep the owner alive while training.
struct WeightedBinarySample {
  std::span<const double> features;
  SignedLabel label = SignedLabel::kNegative;
  double weight = 0.0;
};

struct Stump {
  int feature = 0;
  double threshold = 0.0;
  double left_value = 0.0;   // x[feature] <= threshold
  double right_value = 0.0;  // x[feature] >  threshold

  double value(std::span<const double> x) const {
    return x[feature] <= threshold ? left_value : right_value;
  }

  bool operator==(const Stump&) const = default;
};

struct StumpEnsemble {
  int dimension = 0;
  std::vector<Stump> stumps;

  double predict(std::span<const double> x) const;
  bool operator==(const StumpEnsemble&) const = default;
};

struct LinearModel {
  std::vector<double> coefficients;
  double intercept = 0.0;

  double predict(std::span<const double> x) const;
  bool operator==(const LinearModel&) const = default;
};

// Per-feature affine map to mean 0, variance 1, fitted on training data.
// Constant features keep scale 1 (the shift alone zeroes them out).
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> scale;  // multiplier, 1/stddev

  static Standardizer fit(const MultilabelDataset& data);
  std::vector<double> transformed(std::span<const double> x) const;
  MultilabelDataset transformed(const MultilabelDataset& data) const;
  bool operator==(const Standardizer&) const = default;
};

struct BoostResult {
  StumpEnsemble ensemble;
  std::vector<double> loss_trace;  // weighted empirical exp loss per round
};

// Confidence-rated stump boosting on the weighted exponential loss: each
// round picks the stump with the least weighted error, gives leaves the
// smoothed half-log-odds value, and reweights multiplicatively.
BoostResult train_ada_stumps(std::span<const WeightedBinarySample> samples,
                             int rounds);

struct LogregOptions {
  double lambda = 1.0;
  double tolerance = 1e-8;
  long max_iterations = 100000;
};

// Objective (normalized by total sample weight so tolerances are
// scale-free): sum_n w_n log(1 + exp(-y_n (b + coef.x_n))) + lambda |coef|^2,
// intercept unpenalized. Parameter layout: x[0..d) coefficients, x[d]
// intercept.
Objective make_logreg_objective(std::span<const WeightedBinarySample> samples,
                                double lambda);

LinearModel train_logreg(std::span<const WeightedBinarySample> samples,
                         const LogregOptions& options);

struct PairwiseLinearModel {
  std::vector<LinearModel> per_label;
  std::optional<Standardizer> standardizer;

  ScoreVector predict_scores(std::span<const double> x) const;
  bool operator==(const PairwiseLinearModel&) const = default;
};

struct PairwiseLinearOptions {
  PairwiseSurrogate phi = PairwiseSurrogate::kLogistic;
  long max_iterations = 1000;
  double tolerance = 1e-8;
  bool standardize = true;
};

struct PairwiseLinearResult {
  PairwiseLinearModel model;
  double objective = 0.0;
  long iterations = 0;
  bool converged = false;
};

// Minimizes (1/n) sum_n w(y^n) sum_{(i,j): y_i^n > y_j^n} phi(h_i - h_j)
// over per-label linear scorers by full-batch descent. Hitting the iteration
// cap is normal termination (the cap is the capacity hyperparameter).
PairwiseLinearResult train_pairwise_linear(const MultilabelDataset& data,
                                           const WeightSpec& spec,
                                           const PairwiseLinearOptions& options);

struct PairwiseStumpModel {
  std::vector<StumpEnsemble> per_label;

  ScoreVector predict_scores(std::span<const double> x) const;
  // The model after the first `rounds` boosting rounds. Rounds cycle through
  // labels (round t trains label t mod m), so a prefix is recoverable from
  // the per-label ensembles alone.
  PairwiseStumpModel prefix(int rounds) const;
  bool operator==(const PairwiseStumpModel&) const = default;
};

struct PairwiseStumpResult {
  PairwiseStumpModel model;
  std::vector<double> loss_trace;  // pairwise exp loss after each round
};

// Functional-gradient boosting on the pairwise exponential surrogate: round
// t fits a least-squares stump to the negative gradient of label t mod m's
// scores and sets its leaf values by exact per-leaf minimization.
PairwiseStumpResult train_pairwise_stumps(const MultilabelDataset& data,
                                          const WeightSpec& spec,
                                          int total_stumps);

}  // namespace mlrank

#endif  // MLRANK_CORE_LEARNERS_HPP_
