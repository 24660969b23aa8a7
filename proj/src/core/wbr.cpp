#include "core/wbr.hpp"

#include "core/loss.hpp"
#include "core/parallel.hpp"

namespace mlrank {

std::vector<std::vector<WeightedBinarySample>> decompose(
    const MultilabelDataset& data, const WeightSpec& spec) {
  data.validate();
  const std::size_t n = data.size();
  std::vector<std::vector<WeightedBinarySample>> problems(data.m);
  for (auto& p : problems) p.reserve(n);
  for (std::size_t inst = 0; inst < n; ++inst) {
    const double w = spec.weight(data.labels_of(inst));
    const std::span<const double> x = data.features_of(inst);
    for (int i = 0; i < data.m; ++i)
      problems[i].push_back({x, to_signed(data.label_bit(inst, i)), w});
  }
  return problems;
}

ScoreVector WbrModel::predict_scores(std::span<const double> x) const {
  require(static_cast<int>(x.size()) == d, ErrorCode::kDimensionMismatch,
          "feature length does not match model dimension");
  std::vector<double> input;
  std::span<const double> features = x;
  if (standardizer) {
    input = standardizer->transformed(x);
    features = input;
  }
  std::vector<double> scores(m);
  if (learner == Learner::kAdaStumps) {
    for (int i = 0; i < m; ++i) scores[i] = stumps[i].predict(features);
  } else {
    for (int i = 0; i < m; ++i) scores[i] = linear[i].predict(features);
  }
  return ScoreVector(std::move(scores));
}

WbrModel train_wbr(const MultilabelDataset& data, const WeightSpec& spec,
                   WbrModel::Learner learner, const WbrHyper& hyper) {
  data.validate();
  WbrModel model;
  model.learner = learner;
  model.m = data.m;
  model.d = data.d;
  model.weight_spec = spec;

  const MultilabelDataset* train = &data;
  MultilabelDataset transformed_storage;
  if (learner == WbrModel::Learner::kLogreg) {
    model.standardizer = Standardizer::fit(data);
    transformed_storage = model.standardizer->transformed(data);
    train = &transformed_storage;
  }
  const auto problems = decompose(*train, spec);

  if (learner == WbrModel::Learner::kAdaStumps)
    model.stumps.resize(data.m);
  else
    model.linear.resize(data.m);

  parallel_for(0, data.m, [&](long i) {
    try {
      if (learner == WbrModel::Learner::kAdaStumps) {
        model.stumps[i] = train_ada_stumps(problems[i], hyper.rounds).ensemble;
      } else {
        LogregOptions options;
        options.lambda = hyper.lambda;
        model.linear[i] = train_logreg(problems[i], options);
      }
    } catch (const Error& e) {
      fail(e.code(), "label " + std::to_string(i) + ": " + e.what());
    }
  });
  return model;
}

EvaluateResult evaluate(const Scorer& scorer, const MultilabelDataset& data,
                        const WeightSpec& spec) {
  data.validate();
  const std::size_t n = data.size();
  require(n > 0, ErrorCode::kInvalidArgument, "cannot evaluate on empty data");
  EvaluateResult result;
  result.per_instance.resize(n);
  parallel_for(0, static_cast<long>(n), [&](long inst) {
    const ScoreVector h = scorer(data.features_of(inst));
    result.per_instance[inst] = rank_loss(data.labels_of(inst), h, spec);
  });
  double sum = 0.0;
  for (double v : result.per_instance) sum += v;
  result.mean_rank_loss = sum / static_cast<double>(n);
  return result;
}

}  // namespace mlrank
