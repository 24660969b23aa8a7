#ifndef MLRANK_CORE_TRAIN_HPP_
#define MLRANK_CORE_TRAIN_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "core/dataio.hpp"
#include "core/model.hpp"

namespace mlrank {

// One hyperparameter per method: boosting rounds per label (wbr-ada), the
// L2 strength (wbr-logreg), the optimizer iteration cap (pairwise-log), or
// the total stump count (pairwise-stumps).
std::vector<double> default_grid(Method method);

struct TrainConfig {
  Method method = Method::kWbrLogreg;
  WeightSpec weight;
  std::vector<double> grid;  // empty selects the method default
  std::uint64_t seed = 0;    // tuning split seed
  double tune_fraction = 0.75;
};

struct TuningRow {
  double hyper = 0.0;
  std::optional<double> holdout_loss;  // absent when no split was needed
  bool selected = false;
};

struct TrainOutcome {
  ModelFile model;
  std::vector<TuningRow> tuning;
  double selected_hyper = 0.0;
};

// Trains with a fixed hyperparameter, no tuning split.
ModelFile train_fixed(const MultilabelDataset& data, const TrainConfig& config,
                      double hyper);

// Grid selection on a held-out split by rank loss under the training weight,
// then a refit on the full data. Ties prefer the smaller-capacity value
// (fewer rounds/iterations/stumps, larger lambda).
TrainOutcome train_method(const MultilabelDataset& data,
                          const TrainConfig& config);

}  // namespace mlrank

#endif  // MLRANK_CORE_TRAIN_HPP_
