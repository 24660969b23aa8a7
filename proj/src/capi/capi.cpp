#include "mlrank.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <string>
#include <utility>
#include <vector>

#include "core/dataio.hpp"
#include "core/model.hpp"
#include "core/synthdata.hpp"
#include "core/train.hpp"
#include "core/verify.hpp"
#include "core/wbr.hpp"

#include <json.hpp>

struct mlr_dataset {
  mlrank::MultilabelDataset data;
};

struct mlr_model {
  mlrank::ModelFile file;
  std::string method;
};

struct mlr_synth_model {
  mlrank::SyntheticModel model;
};

namespace {

constexpr const char* kVersion = "1.0.0";

thread_local std::string g_last_error;

mlr_status map_code(mlrank::ErrorCode code) {
  switch (code) {
    case mlrank::ErrorCode::kInvalidArgument:
      return MLR_INVALID_ARGUMENT;
    case mlrank::ErrorCode::kDimensionMismatch:
      return MLR_DIMENSION_MISMATCH;
    case mlrank::ErrorCode::kParse:
      return MLR_PARSE_ERROR;
    case mlrank::ErrorCode::kIo:
      return MLR_IO_ERROR;
    case mlrank::ErrorCode::kNumeric:
      return MLR_NUMERIC_ERROR;
    case mlrank::ErrorCode::kNotConverged:
      return MLR_NOT_CONVERGED;
    case mlrank::ErrorCode::kDegenerateWeight:
      return MLR_DEGENERATE_WEIGHT;
    case mlrank::ErrorCode::kUnknownLabeling:
      return MLR_UNKNOWN_LABELING;
  }
  return MLR_UNKNOWN_ERROR;
}

template <typename F>
mlr_status guarded(F&& body) noexcept {
  try {
    g_last_error.clear();
    body();
    return MLR_OK;
  } catch (const mlrank::Error& e) {
    g_last_error = e.what();
    return map_code(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return MLR_UNKNOWN_ERROR;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return MLR_UNKNOWN_ERROR;
  } catch (...) {
    g_last_error = "unknown failure";
    return MLR_UNKNOWN_ERROR;
  }
}

void check_pointer(const void* p, const char* what) {
  if (p == nullptr) {
    mlrank::fail(mlrank::ErrorCode::kInvalidArgument,
                 std::string(what) + " must not be NULL");
  }
}

/* malloc-backed copy so callers release with mlr_free */
char* copy_string(const std::string& text) {
  char* out = static_cast<char*>(std::malloc(text.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, text.c_str(), text.size() + 1);
  return out;
}

mlrank::WeightSpec make_weight(mlr_weight_kind kind, double c) {
  switch (kind) {
    case MLR_WEIGHT_CONSTANT:
      return mlrank::WeightSpec::constant(c);
    case MLR_WEIGHT_NORMALIZED:
      return mlrank::WeightSpec::pairwise_normalized();
  }
  mlrank::fail(mlrank::ErrorCode::kInvalidArgument, "unknown weight kind");
}

std::string tuning_to_json(const mlrank::TrainOutcome& outcome) {
  nlohmann::json doc;
  doc["selected_hyper"] = outcome.selected_hyper;
  doc["rows"] = nlohmann::json::array();
  for (const mlrank::TuningRow& row : outcome.tuning) {
    nlohmann::json item;
    item["hyper"] = row.hyper;
    if (row.holdout_loss.has_value()) {
      item["holdout_loss"] = *row.holdout_loss;
    } else {
      item["holdout_loss"] = nullptr;
    }
    item["selected"] = row.selected;
    doc["rows"].push_back(std::move(item));
  }
  return doc.dump(2) + "\n";
}

}  // namespace

extern "C" {

const char* mlr_version(void) { return kVersion; }

const char* mlr_last_error(void) { return g_last_error.c_str(); }

void mlr_free(void* buffer) { std::free(buffer); }

uint64_t mlr_derive_seed(uint64_t seed, uint64_t index) {
  return mlrank::derive_seed(seed, index);
}

mlr_status mlr_dataset_read(const char* path, mlr_dataset** out) {
  return guarded([&] {
    check_pointer(path, "path");
    check_pointer(out, "out");
    auto handle = new mlr_dataset{mlrank::read_sparse(path)};
    *out = handle;
  });
}

mlr_status mlr_dataset_write(const mlr_dataset* data, const char* path) {
  return guarded([&] {
    check_pointer(data, "dataset");
    check_pointer(path, "path");
    mlrank::write_sparse(data->data, path);
  });
}

mlr_status mlr_dataset_split(const mlr_dataset* data, double fraction,
                             uint64_t seed, mlr_dataset** head,
                             mlr_dataset** tail) {
  return guarded([&] {
    check_pointer(data, "dataset");
    check_pointer(head, "head");
    check_pointer(tail, "tail");
    auto [first, second] = mlrank::split(data->data, fraction, seed);
    *head = new mlr_dataset{std::move(first)};
    *tail = new mlr_dataset{std::move(second)};
  });
}

void mlr_dataset_destroy(mlr_dataset* data) { delete data; }

int mlr_dataset_labels(const mlr_dataset* data) {
  return data == nullptr ? 0 : data->data.m;
}

int mlr_dataset_dimension(const mlr_dataset* data) {
  return data == nullptr ? 0 : data->data.d;
}

long mlr_dataset_size(const mlr_dataset* data) {
  return data == nullptr ? 0 : static_cast<long>(data->data.size());
}

mlr_status mlr_synth_create(int labels, double noise_sd, int dependent,
                            uint64_t seed, mlr_synth_model** out) {
  return guarded([&] {
    check_pointer(out, "out");
    *out = new mlr_synth_model{
        mlrank::sample_model(labels, dependent != 0, seed, noise_sd)};
  });
}

void mlr_synth_destroy(mlr_synth_model* model) { delete model; }

mlr_status mlr_synth_sample(const mlr_synth_model* model, long n,
                            uint64_t data_seed, mlr_dataset** out) {
  return guarded([&] {
    check_pointer(model, "model");
    check_pointer(out, "out");
    *out = new mlr_dataset{mlrank::sample_dataset(model->model, n, data_seed)};
  });
}

mlr_status mlr_synth_manifest(const mlr_synth_model* model, char** json_out) {
  return guarded([&] {
    check_pointer(model, "model");
    check_pointer(json_out, "json_out");
    *json_out = copy_string(mlrank::synth_manifest_json(model->model, {}));
  });
}

mlr_status mlr_synth_bayes_risk(const mlr_synth_model* model,
                                mlr_weight_kind weight, double weight_c,
                                long n_test, long reps, uint64_t seed,
                                double* value, double* std_error) {
  return guarded([&] {
    check_pointer(model, "model");
    check_pointer(value, "value");
    const mlrank::McEstimate estimate = mlrank::mc_bayes_risk(
        model->model, make_weight(weight, weight_c), n_test, reps, seed);
    *value = estimate.value;
    if (std_error != nullptr) *std_error = estimate.std_error;
  });
}

mlr_status mlr_train(const mlr_dataset* data, const char* method,
                     mlr_weight_kind weight, double weight_c,
                     const double* grid, size_t grid_len, uint64_t seed,
                     mlr_model** out, char** tuning_json) {
  return guarded([&] {
    check_pointer(data, "dataset");
    check_pointer(method, "method");
    check_pointer(out, "out");
    if (grid_len > 0) check_pointer(grid, "grid");
    mlrank::TrainConfig config;
    config.method = mlrank::method_from_name(method);
    config.weight = make_weight(weight, weight_c);
    config.grid.assign(grid, grid + grid_len);
    config.seed = seed;
    mlrank::TrainOutcome outcome = mlrank::train_method(data->data, config);
    auto handle = new mlr_model{std::move(outcome.model), {}};
    handle->method = mlrank::method_name(handle->file.method());
    if (tuning_json != nullptr) {
      *tuning_json = copy_string(tuning_to_json(outcome));
    }
    *out = handle;
  });
}

mlr_status mlr_model_save(const mlr_model* model, const char* path) {
  return guarded([&] {
    check_pointer(model, "model");
    check_pointer(path, "path");
    mlrank::save_model(model->file, path);
  });
}

mlr_status mlr_model_load(const char* path, mlr_model** out) {
  return guarded([&] {
    check_pointer(path, "path");
    check_pointer(out, "out");
    auto handle = new mlr_model{mlrank::load_model(path), {}};
    handle->method = mlrank::method_name(handle->file.method());
    *out = handle;
  });
}

void mlr_model_destroy(mlr_model* model) { delete model; }

int mlr_model_labels(const mlr_model* model) {
  return model == nullptr ? 0 : model->file.labels();
}

int mlr_model_dimension(const mlr_model* model) {
  return model == nullptr ? 0 : model->file.dimension();
}

const char* mlr_model_method(const mlr_model* model) {
  return model == nullptr ? nullptr : model->method.c_str();
}

mlr_status mlr_model_predict(const mlr_model* model, const double* features,
                             size_t dimension, double* scores) {
  return guarded([&] {
    check_pointer(model, "model");
    check_pointer(features, "features");
    check_pointer(scores, "scores");
    const mlrank::ScoreVector h =
        model->file.predict(std::span<const double>(features, dimension));
    std::memcpy(scores, h.scores.data(), h.size() * sizeof(double));
  });
}

mlr_status mlr_evaluate(const mlr_model* model, const mlr_dataset* data,
                        mlr_weight_kind weight, double weight_c,
                        double* mean_loss, double** per_instance) {
  return guarded([&] {
    check_pointer(model, "model");
    check_pointer(data, "dataset");
    check_pointer(mean_loss, "mean_loss");
    if (model->file.labels() != data->data.m ||
        model->file.dimension() != data->data.d) {
      mlrank::fail(mlrank::ErrorCode::kDimensionMismatch,
                   "model shape does not match the dataset");
    }
    const mlrank::ModelFile& file = model->file;
    const mlrank::EvaluateResult result = mlrank::evaluate(
        [&file](std::span<const double> x) { return file.predict(x); },
        data->data, make_weight(weight, weight_c));
    if (per_instance != nullptr) {
      const std::size_t n = result.per_instance.size();
      auto* losses = static_cast<double*>(std::malloc(n * sizeof(double)));
      if (losses == nullptr) throw std::bad_alloc();
      std::memcpy(losses, result.per_instance.data(), n * sizeof(double));
      *per_instance = losses;
    }
    *mean_loss = result.mean_rank_loss;
  });
}

void mlr_verify_options_init(mlr_verify_options* options) {
  if (options == nullptr) return;
  const mlrank::VerifyOptions defaults;
  options->trials = defaults.trials;
  options->min_labels = defaults.min_labels;
  options->max_labels = defaults.max_labels;
  options->seed = defaults.seed;
  options->witness_budget = defaults.witness_budget;
}

mlr_status mlr_verify(const mlr_verify_options* options, const char* suite,
                      int* passed, char** report_json) {
  return guarded([&] {
    check_pointer(passed, "passed");
    mlrank::VerifyOptions opts;
    if (options != nullptr) {
      opts.trials = options->trials;
      opts.min_labels = options->min_labels;
      opts.max_labels = options->max_labels;
      opts.seed = options->seed;
      opts.witness_budget = options->witness_budget;
    }
    const std::string wanted = suite == nullptr ? "all" : suite;
    std::vector<mlrank::SuiteResult> results;
    if (wanted == "all") {
      results = mlrank::run_all_suites(opts);
    } else if (wanted == "mass-identities") {
      results.push_back(mlrank::run_identity_suite(opts));
    } else if (wanted == "regret-decomposition") {
      results.push_back(mlrank::run_decomposition_suite(opts));
    } else if (wanted == "bipartite-reduction") {
      results.push_back(mlrank::run_reduction_suite(opts));
    } else if (wanted == "surrogate-regret-bound") {
      results.push_back(mlrank::run_surrogate_bound_suite(opts));
    } else if (wanted == "univariate-consistency") {
      results.push_back(mlrank::run_consistency_suite(opts));
    } else if (wanted == "pairwise-inconsistency") {
      results.push_back(mlrank::run_inconsistency_suite(opts));
    } else {
      mlrank::fail(mlrank::ErrorCode::kInvalidArgument,
                   "unknown suite: " + wanted);
    }
    if (report_json != nullptr) {
      *report_json = copy_string(mlrank::suites_to_json(results));
    }
    *passed = mlrank::all_passed(results) ? 1 : 0;
  });
}

}  // extern "C"
