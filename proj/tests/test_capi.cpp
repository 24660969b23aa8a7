#include <doctest.h>

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <string>
#include <vector>

#include <json.hpp>
#include <mlrank.h>

#include "core/rng.hpp"

namespace {

namespace fs = std::filesystem;

fs::path temp_file(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "mlrank_capi";
  fs::create_directories(dir);
  return dir / name;
}

struct DatasetHandle {
  mlr_dataset* p = nullptr;
  ~DatasetHandle() { mlr_dataset_destroy(p); }
};

struct ModelHandle {
  mlr_model* p = nullptr;
  ~ModelHandle() { mlr_model_destroy(p); }
};

struct SynthHandle {
  mlr_synth_model* p = nullptr;
  ~SynthHandle() { mlr_synth_destroy(p); }
};

struct Buffer {
  char* p = nullptr;
  ~Buffer() { mlr_free(p); }
};

}  // namespace

TEST_CASE("version, free, and seed derivation") {
  CHECK(std::string(mlr_version()) == "1.0.0");
  mlr_free(nullptr);
  CHECK(mlr_derive_seed(42, 7) == mlrank::derive_seed(42, 7));
  CHECK(mlr_derive_seed(42, 7) != mlr_derive_seed(42, 8));
}

TEST_CASE("synthetic pipeline runs end to end through the c api") {
  SynthHandle synth;
  REQUIRE(mlr_synth_create(3, 0.5, 0, 41, &synth.p) == MLR_OK);

  Buffer manifest;
  REQUIRE(mlr_synth_manifest(synth.p, &manifest.p) == MLR_OK);
  const nlohmann::json doc = nlohmann::json::parse(manifest.p);
  CHECK(doc.at("m") == 3);
  CHECK(doc.at("noise_sd") == 0.5);

  DatasetHandle data;
  REQUIRE(mlr_synth_sample(synth.p, 200, 9, &data.p) == MLR_OK);
  CHECK(mlr_dataset_labels(data.p) == 3);
  CHECK(mlr_dataset_dimension(data.p) == 2);
  CHECK(mlr_dataset_size(data.p) == 200);

  const fs::path path = temp_file("roundtrip.data");
  REQUIRE(mlr_dataset_write(data.p, path.c_str()) == MLR_OK);
  DatasetHandle reread;
  REQUIRE(mlr_dataset_read(path.c_str(), &reread.p) == MLR_OK);
  CHECK(mlr_dataset_labels(reread.p) == 3);
  CHECK(mlr_dataset_dimension(reread.p) == 2);
  CHECK(mlr_dataset_size(reread.p) == 200);

  DatasetHandle head;
  DatasetHandle tail;
  REQUIRE(mlr_dataset_split(reread.p, 0.75, 3, &head.p, &tail.p) == MLR_OK);
  CHECK(mlr_dataset_size(head.p) == 150);
  CHECK(mlr_dataset_size(tail.p) == 50);
  CHECK(mlr_dataset_labels(head.p) == 3);

  const double grid[] = {0.1};
  ModelHandle model;
  REQUIRE(mlr_train(head.p, "wbr-logreg", MLR_WEIGHT_NORMALIZED, 1.0, grid, 1,
                    5, &model.p, nullptr) == MLR_OK);
  CHECK(std::string(mlr_model_method(model.p)) == "wbr-logreg");
  CHECK(mlr_model_labels(model.p) == 3);
  CHECK(mlr_model_dimension(model.p) == 2);

  const fs::path model_path = temp_file("model.json");
  REQUIRE(mlr_model_save(model.p, model_path.c_str()) == MLR_OK);
  ModelHandle loaded;
  REQUIRE(mlr_model_load(model_path.c_str(), &loaded.p) == MLR_OK);
  CHECK(std::string(mlr_model_method(loaded.p)) == "wbr-logreg");

  const double x[] = {0.3, -0.4};
  double scores[3] = {0, 0, 0};
  double scores_again[3] = {0, 0, 0};
  REQUIRE(mlr_model_predict(model.p, x, 2, scores) == MLR_OK);
  REQUIRE(mlr_model_predict(loaded.p, x, 2, scores_again) == MLR_OK);
  for (int i = 0; i < 3; ++i) {
    CHECK(std::isfinite(scores[i]));
    CHECK(scores[i] == scores_again[i]);
  }

  double mean = -1.0;
  double* per_instance = nullptr;
  REQUIRE(mlr_evaluate(model.p, tail.p, MLR_WEIGHT_NORMALIZED, 1.0, &mean,
                       &per_instance) == MLR_OK);
  REQUIRE(per_instance != nullptr);
  CHECK(mean >= 0.0);
  CHECK(mean <= 1.0);
  const long n = mlr_dataset_size(tail.p);
  const double sum = std::accumulate(per_instance, per_instance + n, 0.0);
  CHECK(mean == doctest::Approx(sum / static_cast<double>(n)).epsilon(1e-12));
  mlr_free(per_instance);
}

TEST_CASE("training reports the tuning trace as json") {
  SynthHandle synth;
  REQUIRE(mlr_synth_create(2, 0.3, 0, 51, &synth.p) == MLR_OK);
  DatasetHandle data;
  REQUIRE(mlr_synth_sample(synth.p, 120, 1, &data.p) == MLR_OK);

  const double grid[] = {10.0, 0.1};
  ModelHandle model;
  Buffer tuning;
  REQUIRE(mlr_train(data.p, "wbr-logreg", MLR_WEIGHT_CONSTANT, 1.0, grid, 2,
                    13, &model.p, &tuning.p) == MLR_OK);
  const nlohmann::json doc = nlohmann::json::parse(tuning.p);
  REQUIRE(doc.at("rows").size() == 2);
  CHECK(doc.at("rows")[0].at("hyper") == 10.0);
  CHECK(doc.at("rows")[1].at("hyper") == 0.1);
  int selected = 0;
  for (const auto& row : doc.at("rows")) {
    CHECK(row.at("holdout_loss").is_number());
    if (row.at("selected") == true) ++selected;
  }
  CHECK(selected == 1);
  CHECK(doc.at("selected_hyper").is_number());
}

TEST_CASE("monte carlo bayes risk is exposed") {
  SynthHandle synth;
  REQUIRE(mlr_synth_create(2, 0.4, 1, 61, &synth.p) == MLR_OK);
  double value = -1.0;
  double se = -1.0;
  REQUIRE(mlr_synth_bayes_risk(synth.p, MLR_WEIGHT_NORMALIZED, 1.0, 50, 200,
                               5, &value, &se) == MLR_OK);
  CHECK(value >= 0.0);
  CHECK(value <= 0.5);
  CHECK(se >= 0.0);
  REQUIRE(mlr_synth_bayes_risk(synth.p, MLR_WEIGHT_NORMALIZED, 1.0, 20, 50, 5,
                               &value, nullptr) == MLR_OK);
}

TEST_CASE("verification suites run through the c api") {
  mlr_verify_options options;
  mlr_verify_options_init(&options);
  CHECK(options.trials == 200);
  CHECK(options.min_labels == 2);
  CHECK(options.max_labels == 5);
  CHECK(options.seed == 1);
  CHECK(options.witness_budget == 10000);

  options.trials = 40;
  int passed = 0;
  Buffer report;
  REQUIRE(mlr_verify(&options, "mass-identities", &passed, &report.p) ==
          MLR_OK);
  CHECK(passed == 1);
  const nlohmann::json doc = nlohmann::json::parse(report.p);
  REQUIRE(doc.at("suites").size() == 1);
  CHECK(doc.at("suites")[0].at("name") == "mass-identities");
  CHECK(doc.at("passed") == true);

  CHECK(mlr_verify(&options, "no-such-suite", &passed, nullptr) ==
        MLR_INVALID_ARGUMENT);
  CHECK(std::string(mlr_last_error()).find("unknown suite") !=
        std::string::npos);
}

TEST_CASE("failures set a message and leave out-parameters untouched") {
  mlr_dataset* sentinel = nullptr;
  CHECK(mlr_dataset_read(nullptr, &sentinel) == MLR_INVALID_ARGUMENT);
  CHECK(std::string(mlr_last_error()).find("must not be NULL") !=
        std::string::npos);
  CHECK(sentinel == nullptr);

  const std::string missing = temp_file("does_not_exist.data").string();
  CHECK(mlr_dataset_read(missing.c_str(), &sentinel) == MLR_IO_ERROR);
  CHECK(std::string(mlr_last_error()).find("does_not_exist.data") !=
        std::string::npos);
  CHECK(sentinel == nullptr);

  CHECK(mlr_dataset_read(missing.c_str(), nullptr) == MLR_INVALID_ARGUMENT);

  mlr_synth_model* synth = nullptr;
  CHECK(mlr_synth_create(1, 0.5, 0, 1, &synth) == MLR_INVALID_ARGUMENT);
  CHECK(mlr_synth_create(2, -0.5, 0, 1, &synth) == MLR_INVALID_ARGUMENT);
  CHECK(synth == nullptr);

  CHECK(mlr_dataset_labels(nullptr) == 0);
  CHECK(mlr_dataset_dimension(nullptr) == 0);
  CHECK(mlr_dataset_size(nullptr) == 0);
  CHECK(mlr_model_labels(nullptr) == 0);
  CHECK(mlr_model_method(nullptr) == nullptr);
}

TEST_CASE("shape errors surface as dimension mismatches") {
  SynthHandle synth;
  REQUIRE(mlr_synth_create(3, 0.5, 0, 71, &synth.p) == MLR_OK);
  DatasetHandle data;
  REQUIRE(mlr_synth_sample(synth.p, 80, 2, &data.p) == MLR_OK);
  const double grid[] = {1.0};
  ModelHandle model;
  REQUIRE(mlr_train(data.p, "wbr-logreg", MLR_WEIGHT_CONSTANT, 1.0, grid, 1,
                    5, &model.p, nullptr) == MLR_OK);

  const double x[] = {0.1};
  double scores[3];
  CHECK(mlr_model_predict(model.p, x, 1, scores) == MLR_DIMENSION_MISMATCH);

  const fs::path wide = temp_file("wide.data");
  std::ofstream(wide) << "#m=3 #d=3\n0 0:1 2:-1\n1,2 1:0.5\n";
  DatasetHandle other;
  REQUIRE(mlr_dataset_read(wide.c_str(), &other.p) == MLR_OK);
  double mean = 0.0;
  CHECK(mlr_evaluate(model.p, other.p, MLR_WEIGHT_CONSTANT, 1.0, &mean,
                     nullptr) == MLR_DIMENSION_MISMATCH);
  CHECK(std::string(mlr_last_error()).find("does not match") !=
        std::string::npos);
}

TEST_CASE("bad training inputs are rejected with clear codes") {
  SynthHandle synth;
  REQUIRE(mlr_synth_create(2, 0.5, 0, 81, &synth.p) == MLR_OK);
  DatasetHandle data;
  REQUIRE(mlr_synth_sample(synth.p, 40, 3, &data.p) == MLR_OK);

  mlr_model* model = nullptr;
  CHECK(mlr_train(data.p, "no-such-method", MLR_WEIGHT_CONSTANT, 1.0, nullptr,
                  0, 1, &model, nullptr) == MLR_INVALID_ARGUMENT);
  const double bad_grid[] = {-3.0};
  CHECK(mlr_train(data.p, "wbr-ada", MLR_WEIGHT_CONSTANT, 1.0, bad_grid, 1, 1,
                  &model, nullptr) == MLR_INVALID_ARGUMENT);
  CHECK(model == nullptr);

  mlr_dataset* head = nullptr;
  mlr_dataset* tail = nullptr;
  CHECK(mlr_dataset_split(data.p, 1.0, 1, &head, &tail) ==
        MLR_INVALID_ARGUMENT);
  CHECK(head == nullptr);

  mlr_model* loaded = nullptr;
  const std::string missing = temp_file("missing_model.json").string();
  CHECK(mlr_model_load(missing.c_str(), &loaded) == MLR_IO_ERROR);
}
