#ifndef MLRANK_CORE_SYNTHDATA_HPP_
#define MLRANK_CORE_SYNTHDATA_HPP_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "core/dataio.hpp"
#include "core/oracle.hpp"
#include "core/weights.hpp"

namespace mlrank {

// Latent linear label model: f = Ax + noise, y = [Mf > 0], with x uniform
// on the unit disk. M is the identity in the independent configuration and
// a random [-1, 1] matrix in the dependent one.
struct SyntheticModel {
  int m = 0;
  std::vector<double> a;       // m x 2 row-major, rows unit norm
  std::vector<double> mixing;  // m x m row-major
  double noise_sd = 0.5;
  bool dependent = false;
  std::uint64_t seed = 0;
};

SyntheticModel sample_model(int m, bool dependent, std::uint64_t seed,
                            double noise_sd = 0.5);

// Instance k draws from substream(data_seed, k), so datasets with the same
// seed and different sizes share a common prefix and generation may be
// sharded without changing the bytes.
MultilabelDataset sample_dataset(const SyntheticModel& model, long n,
                                 std::uint64_t data_seed);

// Monte-Carlo estimate of P(y|x) at a fixed point, by resampling the noise.
// Dense outcome table, so m is capped at 12 here.
struct McConditional {
  ConditionalLabelDistribution table;
  std::vector<double> marginal;  // P(y_i = 1 | x)
  std::vector<double> marginal_se;
  long reps = 0;
};

McConditional mc_conditional(const SyntheticModel& model,
                             std::span<const double> x, long reps,
                             std::uint64_t seed);

struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

// Average Bayes rank risk over sampled instances, each scored through the
// Monte-Carlo conditional table; the standard error is bootstrapped over
// the instance-level risks.
McEstimate mc_bayes_risk(const SyntheticModel& model, const WeightSpec& spec,
                         long n_test, long reps_per_x, std::uint64_t seed,
                         int bootstrap_rounds = 200);

// Machine-readable description of a model plus caller-supplied provenance.
std::string synth_manifest_json(
    const SyntheticModel& model,
    const std::map<std::string, std::string>& provenance);

}  // namespace mlrank

#endif  // MLRANK_CORE_SYNTHDATA_HPP_
