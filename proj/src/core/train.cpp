#include "core/train.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <utility>

#include "core/learners.hpp"
#include "core/loss.hpp"
#include "core/wbr.hpp"

namespace mlrank {
namespace {

std::string compact_number(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

std::string describe_weight(const WeightSpec& spec) {
  switch (spec.kind()) {
    case WeightSpec::Kind::kConstant:
      return "constant:" + compact_number(spec.constant_value());
    case WeightSpec::Kind::kPairwiseNormalized:
      return "normalized";
    case WeightSpec::Kind::kTable:
      return "table:" + std::to_string(spec.table_entries().size());
  }
  return "unknown";
}

bool is_capacity_count(Method method) {
  return method == Method::kWbrAda || method == Method::kPairwiseLinear ||
         method == Method::kPairwiseStumps;
}

long checked_count_hyper(double value, const char* what) {
  if (!(value >= 1.0) || value != std::floor(value) || value > 1e9) {
    fail(ErrorCode::kInvalidArgument,
         std::string(what) + " must be a positive integer, got " +
             compact_number(value));
  }
  return static_cast<long>(value);
}

std::vector<double> prepared_grid(const MultilabelDataset& data,
                                  const TrainConfig& config) {
  std::vector<double> grid =
      config.grid.empty() ? default_grid(config.method) : config.grid;
  if (grid.empty()) {
    fail(ErrorCode::kInvalidArgument, "empty hyperparameter grid");
  }
  for (double value : grid) {
    if (!std::isfinite(value)) {
      fail(ErrorCode::kInvalidArgument, "non-finite grid value");
    }
    if (is_capacity_count(config.method)) {
      checked_count_hyper(value, "grid value");
    } else if (!(value > 0.0)) {
      fail(ErrorCode::kInvalidArgument, "grid value must be positive");
    }
  }
  if (config.method == Method::kPairwiseStumps) {
    // Fewer total stumps than labels cannot give every label a scorer.
    std::erase_if(grid, [&](double v) { return v < data.m; });
    if (grid.empty()) {
      fail(ErrorCode::kInvalidArgument,
           "every grid value is below the label count " +
               std::to_string(data.m));
    }
  }
  // Capacity-ascending order; for lambda larger means less capacity.
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  if (config.method == Method::kWbrLogreg) {
    std::reverse(grid.begin(), grid.end());
  }
  return grid;
}

Scorer model_scorer(const ModelFile& file) {
  return [&file](std::span<const double> features) {
    return file.predict(features);
  };
}

double holdout_loss(const ModelFile& candidate, const MultilabelDataset& data,
                    const WeightSpec& weight) {
  return evaluate(model_scorer(candidate), data, weight).mean_rank_loss;
}

ModelFile wrap_wbr(WbrModel model, const WeightSpec& weight) {
  ModelFile file;
  model.weight_spec = weight;
  file.model = std::move(model);
  file.train_weight = weight;
  return file;
}

ModelFile wrap_pairwise_linear(PairwiseLinearModel model,
                               const WeightSpec& weight) {
  ModelFile file;
  file.model = std::move(model);
  file.train_weight = weight;
  return file;
}

ModelFile wrap_pairwise_stumps(PairwiseStumpModel model,
                               const WeightSpec& weight) {
  ModelFile file;
  file.model = std::move(model);
  file.train_weight = weight;
  return file;
}

// Truncates every per-label ensemble to its first `rounds` stumps. Boosting
// rounds are sequential, so this equals the model trained with that budget.
WbrModel wbr_prefix(const WbrModel& model, int rounds) {
  WbrModel cut = model;
  for (auto& ensemble : cut.stumps) {
    if (std::ssize(ensemble.stumps) > rounds) {
      ensemble.stumps.resize(static_cast<std::size_t>(rounds));
    }
  }
  return cut;
}

struct Selection {
  double hyper = 0.0;
  std::vector<TuningRow> rows;
};

Selection select_by_holdout(
    const std::vector<double>& grid,
    const std::vector<std::optional<double>>& losses) {
  Selection out;
  std::size_t best = grid.size();
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (!losses[k].has_value()) continue;
    if (best == grid.size() || *losses[k] < *losses[best]) best = k;
  }
  if (best == grid.size()) {
    fail(ErrorCode::kNotConverged, "no grid value produced a holdout score");
  }
  out.hyper = grid[best];
  out.rows.reserve(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    out.rows.push_back({grid[k], losses[k], k == best});
  }
  return out;
}

}  // namespace

std::vector<double> default_grid(Method method) {
  switch (method) {
    case Method::kWbrAda:
      return {10, 20, 50, 100, 200};
    case Method::kWbrLogreg:
      return {1e-3, 1e-2, 1e-1, 1.0, 10.0, 100.0, 1000.0};
    case Method::kPairwiseLinear:
    case Method::kPairwiseStumps:
      return {10, 20, 50, 100, 1000, 10000, 20000};
  }
  fail(ErrorCode::kInvalidArgument, "unknown method");
}

ModelFile train_fixed(const MultilabelDataset& data, const TrainConfig& config,
                      double hyper) {
  switch (config.method) {
    case Method::kWbrAda: {
      WbrHyper h;
      h.rounds = static_cast<int>(checked_count_hyper(hyper, "rounds"));
      return wrap_wbr(
          train_wbr(data, config.weight, WbrModel::Learner::kAdaStumps, h),
          config.weight);
    }
    case Method::kWbrLogreg: {
      if (!(hyper > 0.0) || !std::isfinite(hyper)) {
        fail(ErrorCode::kInvalidArgument, "lambda must be positive");
      }
      WbrHyper h;
      h.lambda = hyper;
      return wrap_wbr(
          train_wbr(data, config.weight, WbrModel::Learner::kLogreg, h),
          config.weight);
    }
    case Method::kPairwiseLinear: {
      PairwiseLinearOptions options;
      options.max_iterations = checked_count_hyper(hyper, "iteration cap");
      return wrap_pairwise_linear(
          train_pairwise_linear(data, config.weight, options).model,
          config.weight);
    }
    case Method::kPairwiseStumps: {
      int total = static_cast<int>(checked_count_hyper(hyper, "stump count"));
      return wrap_pairwise_stumps(
          train_pairwise_stumps(data, config.weight, total).model,
          config.weight);
    }
  }
  fail(ErrorCode::kInvalidArgument, "unknown method");
}

TrainOutcome train_method(const MultilabelDataset& data,
                          const TrainConfig& config) {
  if (!(config.tune_fraction > 0.0) || !(config.tune_fraction < 1.0)) {
    fail(ErrorCode::kInvalidArgument, "tune fraction must be inside (0, 1)");
  }
  std::vector<double> grid = prepared_grid(data, config);

  TrainOutcome out;
  if (grid.size() == 1) {
    out.selected_hyper = grid[0];
    out.tuning.push_back({grid[0], std::nullopt, true});
    out.model = train_fixed(data, config, grid[0]);
  } else {
    auto [tune_train, tune_holdout] =
        split(data, config.tune_fraction, config.seed);
    std::vector<std::optional<double>> losses(grid.size());
    switch (config.method) {
      case Method::kWbrAda: {
        // One run at the largest budget; smaller budgets are its prefixes.
        WbrHyper h;
        h.rounds = static_cast<int>(
            checked_count_hyper(grid.back(), "rounds"));
        WbrModel full = train_wbr(tune_train, config.weight,
                                  WbrModel::Learner::kAdaStumps, h);
        for (std::size_t k = 0; k < grid.size(); ++k) {
          ModelFile candidate = wrap_wbr(
              wbr_prefix(full, static_cast<int>(grid[k])), config.weight);
          losses[k] = holdout_loss(candidate, tune_holdout, config.weight);
        }
        break;
      }
      case Method::kPairwiseStumps: {
        int total = static_cast<int>(
            checked_count_hyper(grid.back(), "stump count"));
        PairwiseStumpModel full =
            train_pairwise_stumps(tune_train, config.weight, total).model;
        for (std::size_t k = 0; k < grid.size(); ++k) {
          ModelFile candidate = wrap_pairwise_stumps(
              full.prefix(static_cast<int>(grid[k])), config.weight);
          losses[k] = holdout_loss(candidate, tune_holdout, config.weight);
        }
        break;
      }
      case Method::kWbrLogreg:
      case Method::kPairwiseLinear: {
        for (std::size_t k = 0; k < grid.size(); ++k) {
          ModelFile candidate = train_fixed(tune_train, config, grid[k]);
          losses[k] = holdout_loss(candidate, tune_holdout, config.weight);
        }
        break;
      }
    }
    Selection chosen = select_by_holdout(grid, losses);
    out.selected_hyper = chosen.hyper;
    out.tuning = std::move(chosen.rows);
    out.model = train_fixed(data, config, chosen.hyper);
  }

  auto& prov = out.model.provenance;
  prov["method"] = method_name(config.method);
  prov["weight"] = describe_weight(config.weight);
  prov["hyper"] = compact_number(out.selected_hyper);
  prov["tuned"] = grid.size() == 1 ? "no" : "yes";
  prov["tuning_seed"] = std::to_string(config.seed);
  prov["tune_fraction"] = compact_number(config.tune_fraction);
  prov["n_train"] = std::to_string(data.size());
  std::string grid_text;
  for (double value : grid) {
    if (!grid_text.empty()) grid_text += ",";
    grid_text += compact_number(value);
  }
  prov["grid"] = grid_text;
  return out;
}

}  // namespace mlrank
