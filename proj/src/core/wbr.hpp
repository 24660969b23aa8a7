#ifndef MLRANK_CORE_WBR_HPP_
#define MLRANK_CORE_WBR_HPP_

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "core/dataio.hpp"
#include "core/learners.hpp"
#include "core/weights.hpp"

namespace mlrank {

// The m weighted binary problems induced by a dataset: problem i carries
// every instance with weight w(y^n) and the sign of label bit i. Samples
// view the dataset's feature storage; keep the dataset alive while training.
std::vector<std::vector<WeightedBinarySample>> decompose(
    const MultilabelDataset& data, const WeightSpec& spec);

// Weighted Binary Relevance: m independently trained per-label scorers
// assembled into one ranking model.
struct WbrModel {
  enum class Learner { kAdaStumps, kLogreg };

  Learner learner = Learner::kLogreg;
  int m = 0;
  int d = 0;
  WeightSpec weight_spec;  // weight used at train time, kept for provenance
  std::optional<Standardizer> standardizer;
  std::vector<StumpEnsemble> stumps;  // per label, kAdaStumps
  std::vector<LinearModel> linear;    // per label, kLogreg

  ScoreVector predict_scores(std::span<const double> x) const;
};

struct WbrHyper {
  int rounds = 100;     // kAdaStumps
  double lambda = 1.0;  // kLogreg
};

WbrModel train_wbr(const MultilabelDataset& data, const WeightSpec& spec,
                   WbrModel::Learner learner, const WbrHyper& hyper);

using Scorer = std::function<ScoreVector(std::span<const double>)>;

struct EvaluateResult {
  double mean_rank_loss = 0.0;
  std::vector<double> per_instance;
};

// Mean rank loss of any scorer over a dataset. Instances are scored
// concurrently, so the scorer must be a pure function of its input.
EvaluateResult evaluate(const Scorer& scorer, const MultilabelDataset& data,
                        const WeightSpec& spec);

}  // namespace mlrank

#endif  // MLRANK_CORE_WBR_HPP_
