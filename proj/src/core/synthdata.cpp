#include "core/synthdata.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

#include "core/parallel.hpp"
#include "core/rng.hpp"

namespace mlrank {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr int kMaxMcLabels = 12;

void check_model(const SyntheticModel& model) {
  require(model.m >= 2, ErrorCode::kInvalidArgument, "model needs m >= 2");
  require(model.noise_sd >= 0.0, ErrorCode::kInvalidArgument,
          "noise sd must be >= 0");
  require(model.a.size() == static_cast<std::size_t>(model.m) * 2,
          ErrorCode::kInvalidArgument, "latent matrix must be m x 2");
  require(model.mixing.size() == static_cast<std::size_t>(model.m) * model.m,
          ErrorCode::kInvalidArgument, "mixing matrix must be m x m");
}

void sample_disk_point(Rng& rng, double& x0, double& x1) {
  const double radius = std::sqrt(rng.uniform());
  const double angle = kTwoPi * rng.uniform();
  x0 = radius * std::cos(angle);
  x1 = radius * std::sin(angle);
}

// One draw of y at fixed x; latent and mixed activations in caller buffers.
void sample_labels(const SyntheticModel& model, double x0, double x1, Rng& rng,
                   std::vector<double>& latent, std::vector<std::uint8_t>& bits) {
  const int m = model.m;
  for (int i = 0; i < m; ++i)
    latent[i] = model.a[2 * i] * x0 + model.a[2 * i + 1] * x1 +
                rng.normal(0.0, model.noise_sd);
  for (int i = 0; i < m; ++i) {
    double mixed = 0.0;
    const double* row = model.mixing.data() + static_cast<std::size_t>(i) * m;
    for (int j = 0; j < m; ++j) mixed += row[j] * latent[j];
    bits[i] = mixed > 0.0 ? 1 : 0;
  }
}

}  // namespace

SyntheticModel sample_model(int m, bool dependent, std::uint64_t seed,
                            double noise_sd) {
  require(m >= 2, ErrorCode::kInvalidArgument, "model needs m >= 2");
  require(noise_sd >= 0.0, ErrorCode::kInvalidArgument, "noise sd must be >= 0");
  SyntheticModel model;
  model.m = m;
  model.noise_sd = noise_sd;
  model.dependent = dependent;
  model.seed = seed;
  model.a.resize(static_cast<std::size_t>(m) * 2);
  model.mixing.assign(static_cast<std::size_t>(m) * m, 0.0);

  Rng rng(seed);
  for (int i = 0; i < m; ++i) {
    const double angle = kTwoPi * rng.uniform();
    model.a[2 * i] = std::cos(angle);
    model.a[2 * i + 1] = std::sin(angle);
  }
  if (dependent) {
    for (double& v : model.mixing) v = rng.uniform(-1.0, 1.0);
  } else {
    for (int i = 0; i < m; ++i)
      model.mixing[static_cast<std::size_t>(i) * m + i] = 1.0;
  }
  return model;
}

MultilabelDataset sample_dataset(const SyntheticModel& model, long n,
                                 std::uint64_t data_seed) {
  check_model(model);
  require(n >= 1, ErrorCode::kInvalidArgument, "need n >= 1 instances");

  MultilabelDataset data;
  data.m = model.m;
  data.d = 2;
  data.comments.push_back(
      " synthetic model_seed=" + std::to_string(model.seed) +
      " mode=" + (model.dependent ? std::string("dependent") : std::string("independent")) +
      " noise_sd=" + std::to_string(model.noise_sd) +
      " data_seed=" + std::to_string(data_seed) + " n=" + std::to_string(n));
  data.features.resize(static_cast<std::size_t>(n) * 2);
  data.labels.resize(static_cast<std::size_t>(n) * model.m);

  parallel_for(0, n, [&](long k) {
    Rng rng = substream(data_seed, static_cast<std::uint64_t>(k));
    std::vector<double> latent(model.m);
    std::vector<std::uint8_t> bits(model.m);
    double x0 = 0.0, x1 = 0.0;
    sample_disk_point(rng, x0, x1);
    sample_labels(model, x0, x1, rng, latent, bits);
    data.features[2 * k] = x0;
    data.features[2 * k + 1] = x1;
    std::copy(bits.begin(), bits.end(),
              data.labels.begin() + static_cast<std::size_t>(k) * model.m);
  });
  return data;
}

McConditional mc_conditional(const SyntheticModel& model,
                             std::span<const double> x, long reps,
                             std::uint64_t seed) {
  check_model(model);
  require(model.m <= kMaxMcLabels, ErrorCode::kInvalidArgument,
          "conditional estimation caps m at 12 (dense outcome table)");
  require(x.size() == 2, ErrorCode::kDimensionMismatch,
          "instance must be 2-dimensional");
  require(reps >= 1, ErrorCode::kInvalidArgument, "need reps >= 1");

  const int m = model.m;
  std::vector<long> counts(std::size_t{1} << m, 0);
  std::vector<long> positive(m, 0);
  std::vector<double> latent(m);
  std::vector<std::uint8_t> bits(m);
  Rng rng(seed);
  for (long r = 0; r < reps; ++r) {
    sample_labels(model, x[0], x[1], rng, latent, bits);
    std::size_t index = 0;
    for (int i = 0; i < m; ++i) {
      index |= static_cast<std::size_t>(bits[i]) << i;
      positive[i] += bits[i];
    }
    ++counts[index];
  }

  std::vector<double> probs(counts.size());
  for (std::size_t k = 0; k < counts.size(); ++k)
    probs[k] = static_cast<double>(counts[k]) / static_cast<double>(reps);
  // Pin the total to 1 exactly so the distribution passes its validity gate.
  double total = 0.0;
  for (double p : probs) total += p;
  const std::size_t top =
      std::max_element(probs.begin(), probs.end()) - probs.begin();
  probs[top] += 1.0 - total;

  McConditional result{ConditionalLabelDistribution::create(m, std::move(probs)),
                       std::vector<double>(m), std::vector<double>(m), reps};
  for (int i = 0; i < m; ++i) {
    const double p = static_cast<double>(positive[i]) / static_cast<double>(reps);
    result.marginal[i] = p;
    result.marginal_se[i] =
        std::sqrt(std::max(0.0, p * (1.0 - p) / static_cast<double>(reps)));
  }
  return result;
}

McEstimate mc_bayes_risk(const SyntheticModel& model, const WeightSpec& spec,
                         long n_test, long reps_per_x, std::uint64_t seed,
                         int bootstrap_rounds) {
  check_model(model);
  require(n_test >= 1, ErrorCode::kInvalidArgument, "need n_test >= 1");
  require(bootstrap_rounds >= 1, ErrorCode::kInvalidArgument,
          "need at least one bootstrap round");

  std::vector<double> risks(n_test);
  parallel_for(0, n_test, [&](long k) {
    Rng point_rng = substream(seed, 2 * static_cast<std::uint64_t>(k));
    double x[2];
    sample_disk_point(point_rng, x[0], x[1]);
    const McConditional cond = mc_conditional(
        model, x, reps_per_x, derive_seed(seed, 2 * static_cast<std::uint64_t>(k) + 1));
    risks[k] = bayes_rank_risk(compute_deltas(cond.table, spec));
  });

  double mean = 0.0;
  for (double r : risks) mean += r;
  mean /= static_cast<double>(n_test);

  Rng boot = substream(seed, 2 * static_cast<std::uint64_t>(n_test));
  double sum = 0.0, sum_sq = 0.0;
  for (int b = 0; b < bootstrap_rounds; ++b) {
    double resampled = 0.0;
    for (long k = 0; k < n_test; ++k)
      resampled += risks[boot.below(static_cast<std::uint64_t>(n_test))];
    resampled /= static_cast<double>(n_test);
    sum += resampled;
    sum_sq += resampled * resampled;
  }
  const double boot_mean = sum / bootstrap_rounds;
  return {mean, std::sqrt(std::max(0.0, sum_sq / bootstrap_rounds -
                                            boot_mean * boot_mean))};
}

std::string synth_manifest_json(
    const SyntheticModel& model,
    const std::map<std::string, std::string>& provenance) {
  check_model(model);
  nlohmann::json doc;
  doc["format"] = "mlrank-synthetic-model";
  doc["version"] = 1;
  doc["m"] = model.m;
  doc["noise_sd"] = model.noise_sd;
  doc["dependent"] = model.dependent;
  doc["seed"] = model.seed;
  nlohmann::json a = nlohmann::json::array();
  for (int i = 0; i < model.m; ++i)
    a.push_back({model.a[2 * i], model.a[2 * i + 1]});
  doc["a"] = std::move(a);
  nlohmann::json mixing = nlohmann::json::array();
  for (int i = 0; i < model.m; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < model.m; ++j)
      row.push_back(model.mixing[static_cast<std::size_t>(i) * model.m + j]);
    mixing.push_back(std::move(row));
  }
  doc["mixing"] = std::move(mixing);
  doc["mixing_is_identity"] = !model.dependent;
  doc["provenance"] = provenance;
  return doc.dump(2) + "\n";
}

}  // namespace mlrank
