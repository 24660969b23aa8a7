// Command-line front end over the C API (mlrank.h). Exit codes: 0 success,
// 1 usage, 2 data or runtime failure, 3 verification failure.

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mlrank.h"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitVerification = 3;

struct CliError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(mlr_status status) {
  if (status != MLR_OK) throw CliError(mlr_last_error());
}

struct DatasetDeleter {
  void operator()(mlr_dataset* p) const { mlr_dataset_destroy(p); }
};
struct ModelDeleter {
  void operator()(mlr_model* p) const { mlr_model_destroy(p); }
};
struct SynthDeleter {
  void operator()(mlr_synth_model* p) const { mlr_synth_destroy(p); }
};
struct BufferDeleter {
  void operator()(void* p) const { mlr_free(p); }
};

using DatasetPtr = std::unique_ptr<mlr_dataset, DatasetDeleter>;
using ModelPtr = std::unique_ptr<mlr_model, ModelDeleter>;
using SynthPtr = std::unique_ptr<mlr_synth_model, SynthDeleter>;
using TextPtr = std::unique_ptr<char, BufferDeleter>;

DatasetPtr read_dataset(const std::string& path) {
  mlr_dataset* raw = nullptr;
  check(mlr_dataset_read(path.c_str(), &raw));
  return DatasetPtr(raw);
}

ModelPtr load_model(const std::string& path) {
  mlr_model* raw = nullptr;
  check(mlr_model_load(path.c_str(), &raw));
  return ModelPtr(raw);
}

std::string format_loss(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.6f", value);
  return buffer;
}

std::string format_number(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CliError("cannot open " + path + " for writing");
  out << text;
  if (!out.flush()) throw CliError("failed writing " + path);
}

mlr_weight_kind parse_weight(const std::string& name) {
  if (name == "constant") return MLR_WEIGHT_CONSTANT;
  if (name == "normalized") return MLR_WEIGHT_NORMALIZED;
  throw CliError("unknown weight function: " + name);
}

std::string weight_text(mlr_weight_kind kind, double c) {
  return kind == MLR_WEIGHT_CONSTANT ? "constant:" + format_number(c)
                                     : "normalized";
}

struct GenerateOptions {
  int labels = 5;
  double noise_sd = 0.5;
  bool dependent = false;
  std::uint64_t model_seed = 1;
  std::uint64_t data_seed = 1;
  long n_train = 1000;
  long n_test = 1000;
  std::string out_dir;
};

void sample_to_file(mlr_synth_model* synth, long n, std::uint64_t seed,
                    const std::string& path) {
  mlr_dataset* raw = nullptr;
  check(mlr_synth_sample(synth, n, seed, &raw));
  DatasetPtr data(raw);
  check(mlr_dataset_write(data.get(), path.c_str()));
}

int run_generate(const GenerateOptions& o) {
  std::error_code ec;
  std::filesystem::create_directories(o.out_dir, ec);
  if (ec) throw CliError("cannot create " + o.out_dir + ": " + ec.message());

  mlr_synth_model* synth_raw = nullptr;
  check(mlr_synth_create(o.labels, o.noise_sd, o.dependent ? 1 : 0,
                         o.model_seed, &synth_raw));
  SynthPtr synth(synth_raw);

  const std::string train_path = o.out_dir + "/train.data";
  const std::string test_path = o.out_dir + "/test.data";
  sample_to_file(synth.get(), o.n_train, mlr_derive_seed(o.data_seed, 0),
                 train_path);
  sample_to_file(synth.get(), o.n_test, mlr_derive_seed(o.data_seed, 1),
                 test_path);

  char* manifest = nullptr;
  check(mlr_synth_manifest(synth.get(), &manifest));
  TextPtr text(manifest);
  write_text(o.out_dir + "/manifest.json", text.get());

  std::cout << "wrote " << o.n_train << " train and " << o.n_test
            << " test instances (m=" << o.labels << ", d=2) under "
            << o.out_dir << "\n";
  return 0;
}

struct TrainOptions {
  std::string data_path;
  std::string method = "wbr-logreg";
  std::string weight = "normalized";
  double weight_c = 1.0;
  std::vector<double> grid;
  std::uint64_t seed = 1;
  std::string model_out;
  std::string tuning_out;
};

// Converts the training trace (JSON from the API) into the CSV emitted next
// to the model file.
std::string tuning_csv(const std::string& json_text, const TrainOptions& o) {
  const nlohmann::json doc = nlohmann::json::parse(json_text);
  std::ostringstream csv;
  csv << "# method=" << o.method << " data=" << o.data_path << " weight="
      << weight_text(parse_weight(o.weight), o.weight_c) << " seed=" << o.seed
      << " selected=" << format_number(doc.at("selected_hyper").get<double>())
      << "\n";
  csv << "hyper,holdout_rank_loss,selected\n";
  for (const auto& row : doc.at("rows")) {
    csv << format_number(row.at("hyper").get<double>()) << ",";
    if (!row.at("holdout_loss").is_null()) {
      csv << format_loss(row.at("holdout_loss").get<double>());
    }
    csv << "," << (row.at("selected").get<bool>() ? 1 : 0) << "\n";
  }
  return csv.str();
}

int run_train(const TrainOptions& o) {
  DatasetPtr data = read_dataset(o.data_path);
  const mlr_weight_kind kind = parse_weight(o.weight);

  mlr_model* model_raw = nullptr;
  char* tuning_raw = nullptr;
  check(mlr_train(data.get(), o.method.c_str(), kind, o.weight_c,
                  o.grid.empty() ? nullptr : o.grid.data(), o.grid.size(),
                  o.seed, &model_raw,
                  o.tuning_out.empty() ? nullptr : &tuning_raw));
  ModelPtr model(model_raw);
  TextPtr tuning(tuning_raw);

  check(mlr_model_save(model.get(), o.model_out.c_str()));
  if (!o.tuning_out.empty()) write_text(o.tuning_out, tuning_csv(tuning.get(), o));
  std::cout << "trained " << o.method << " on " << mlr_dataset_size(data.get())
            << " instances; model saved to " << o.model_out << "\n";
  return 0;
}

struct EvalOptions {
  std::string model_path;
  std::string data_path;
  std::string weight = "normalized";
  double weight_c = 1.0;
  std::string per_instance_out;
};

int run_eval(const EvalOptions& o) {
  ModelPtr model = load_model(o.model_path);
  DatasetPtr data = read_dataset(o.data_path);
  const mlr_weight_kind kind = parse_weight(o.weight);

  double mean = 0.0;
  double* per_instance = nullptr;
  const bool want_rows = !o.per_instance_out.empty();
  check(mlr_evaluate(model.get(), data.get(), kind, o.weight_c, &mean,
                     want_rows ? &per_instance : nullptr));
  std::unique_ptr<double, BufferDeleter> rows(per_instance);

  if (want_rows) {
    std::ostringstream csv;
    csv << "# model=" << o.model_path << " method="
        << mlr_model_method(model.get()) << " data=" << o.data_path
        << " weight=" << weight_text(kind, o.weight_c) << "\n";
    csv << "instance,rank_loss\n";
    const long n = mlr_dataset_size(data.get());
    for (long i = 0; i < n; ++i) {
      csv << i << "," << format_loss(rows.get()[i]) << "\n";
    }
    write_text(o.per_instance_out, csv.str());
  }
  std::cout << "mean_rank_loss " << format_loss(mean) << "\n";
  return 0;
}

struct VerifyCliOptions {
  std::string suite = "all";
  long trials = 200;
  int min_labels = 2;
  int max_labels = 5;
  std::uint64_t seed = 1;
  long witness_budget = 10000;
  std::string report_path;
};

int run_verify(const VerifyCliOptions& o) {
  mlr_verify_options options;
  mlr_verify_options_init(&options);
  options.trials = o.trials;
  options.min_labels = o.min_labels;
  options.max_labels = o.max_labels;
  options.seed = o.seed;
  options.witness_budget = o.witness_budget;

  int passed = 0;
  char* report_raw = nullptr;
  check(mlr_verify(&options, o.suite.c_str(), &passed, &report_raw));
  TextPtr report(report_raw);
  std::cout << report.get();
  if (!o.report_path.empty()) write_text(o.report_path, report.get());
  if (passed == 0) {
    std::cerr << "verification failed\n";
    return kExitVerification;
  }
  return 0;
}

struct CurveOptions {
  int labels = 5;
  double noise_sd = 0.5;
  bool dependent = false;
  std::uint64_t model_seed = 1;
  std::uint64_t data_seed = 1;
  std::vector<long> sizes = {100, 400, 1600, 4000};
  int repeats = 1;
  long test_n = 2000;
  long bayes_points = 400;
  long bayes_reps = 2000;
  std::string method = "wbr-logreg";
  std::string weight = "normalized";
  double weight_c = 1.0;
  std::vector<double> grid;
  std::uint64_t train_seed = 1;
  std::string out_path;
};

int run_curve(const CurveOptions& o) {
  const mlr_weight_kind kind = parse_weight(o.weight);

  mlr_synth_model* synth_raw = nullptr;
  check(mlr_synth_create(o.labels, o.noise_sd, o.dependent ? 1 : 0,
                         o.model_seed, &synth_raw));
  SynthPtr synth(synth_raw);

  double bayes = 0.0;
  double bayes_se = 0.0;
  check(mlr_synth_bayes_risk(synth.get(), kind, o.weight_c, o.bayes_points,
                             o.bayes_reps, mlr_derive_seed(o.data_seed, 1),
                             &bayes, &bayes_se));

  mlr_dataset* test_raw = nullptr;
  check(mlr_synth_sample(synth.get(), o.test_n,
                         mlr_derive_seed(o.data_seed, 2), &test_raw));
  DatasetPtr test(test_raw);

  std::ostringstream csv;
  csv << "# method=" << o.method << " weight=" << weight_text(kind, o.weight_c)
      << " labels=" << o.labels << " noise_sd=" << format_number(o.noise_sd)
      << " dependent=" << (o.dependent ? 1 : 0) << " model_seed="
      << o.model_seed << " data_seed=" << o.data_seed << " train_seed="
      << o.train_seed << " test_n=" << o.test_n << "\n";
  csv << "# bayes_estimate=" << format_loss(bayes) << " bayes_se="
      << format_loss(bayes_se) << " bayes_points=" << o.bayes_points
      << " bayes_reps=" << o.bayes_reps << "\n";
  csv << "n,repeat,mean_rank_loss\n";

  for (long n : o.sizes) {
    for (int r = 0; r < o.repeats; ++r) {
      mlr_dataset* train_raw = nullptr;
      check(mlr_synth_sample(synth.get(), n,
                             mlr_derive_seed(o.data_seed, 100 + r),
                             &train_raw));
      DatasetPtr train(train_raw);

      mlr_model* model_raw = nullptr;
      check(mlr_train(train.get(), o.method.c_str(), kind, o.weight_c,
                      o.grid.empty() ? nullptr : o.grid.data(), o.grid.size(),
                      mlr_derive_seed(o.train_seed, static_cast<std::uint64_t>(
                                                        100 + r)),
                      &model_raw, nullptr));
      ModelPtr model(model_raw);

      double mean = 0.0;
      check(mlr_evaluate(model.get(), test.get(), kind, o.weight_c, &mean,
                         nullptr));
      csv << n << "," << r << "," << format_loss(mean) << "\n";
      std::cout << "n=" << n << " repeat=" << r << " mean_rank_loss "
                << format_loss(mean) << "\n";
    }
  }
  std::cout << "bayes_estimate " << format_loss(bayes) << " (se "
            << format_loss(bayes_se) << ")\n";
  if (!o.out_path.empty()) write_text(o.out_path, csv.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multilabel ranking laboratory (library "
               + std::string(mlr_version()) + ")"};
  app.require_subcommand(1);

  GenerateOptions gen;
  CLI::App* gen_cmd =
      app.add_subcommand("generate", "sample a synthetic dataset");
  gen_cmd->add_option("--labels,-m", gen.labels, "label count")
      ->check(CLI::Range(2, 64));
  gen_cmd->add_option("--noise-sd", gen.noise_sd, "latent noise sd")
      ->check(CLI::NonNegativeNumber);
  gen_cmd->add_flag("--dependent", gen.dependent, "random label mixing");
  gen_cmd->add_option("--model-seed", gen.model_seed, "model parameter seed");
  gen_cmd->add_option("--data-seed", gen.data_seed, "instance stream seed");
  gen_cmd->add_option("--n-train", gen.n_train, "training instances")
      ->check(CLI::PositiveNumber);
  gen_cmd->add_option("--n-test", gen.n_test, "test instances")
      ->check(CLI::PositiveNumber);
  gen_cmd
      ->add_option("--out-dir", gen.out_dir,
                   "directory for train.data, test.data, manifest.json")
      ->required();

  TrainOptions train;
  CLI::App* train_cmd = app.add_subcommand("train", "fit a ranking model");
  train_cmd->add_option("--data", train.data_path, "training dataset")
      ->required();
  train_cmd
      ->add_option("--method", train.method,
                   "wbr-ada | wbr-logreg | pairwise-log | pairwise-stumps")
      ->check(CLI::IsMember(
          {"wbr-ada", "wbr-logreg", "pairwise-log", "pairwise-stumps"}));
  train_cmd->add_option("--weight", train.weight, "constant | normalized")
      ->check(CLI::IsMember({"constant", "normalized"}));
  train_cmd->add_option("--weight-c", train.weight_c,
                        "constant weight value");
  train_cmd->add_option("--grid", train.grid,
                        "hyperparameter candidates (default per method)");
  train_cmd->add_option("--seed", train.seed, "tuning split seed");
  train_cmd->add_option("--model-out", train.model_out, "model file path")
      ->required();
  train_cmd->add_option("--tuning-out", train.tuning_out,
                        "write the tuning trace CSV here");

  EvalOptions eval;
  CLI::App* eval_cmd =
      app.add_subcommand("eval", "mean rank loss of a model on a dataset");
  eval_cmd->add_option("--model", eval.model_path, "model file")->required();
  eval_cmd->add_option("--data", eval.data_path, "evaluation dataset")
      ->required();
  eval_cmd->add_option("--weight", eval.weight, "constant | normalized")
      ->check(CLI::IsMember({"constant", "normalized"}));
  eval_cmd->add_option("--weight-c", eval.weight_c, "constant weight value");
  eval_cmd->add_option("--per-instance", eval.per_instance_out,
                       "write per-instance losses CSV here");

  VerifyCliOptions verify;
  CLI::App* verify_cmd = app.add_subcommand(
      "verify", "run randomized verification suites on exact distributions");
  verify_cmd->add_option(
      "--suite", verify.suite,
      "all | mass-identities | regret-decomposition | bipartite-reduction | "
      "surrogate-regret-bound | univariate-consistency | "
      "pairwise-inconsistency");
  verify_cmd->add_option("--trials", verify.trials, "trials per suite")
      ->check(CLI::PositiveNumber);
  verify_cmd->add_option("--min-labels", verify.min_labels, "smallest m")
      ->check(CLI::Range(2, 12));
  verify_cmd->add_option("--max-labels", verify.max_labels, "largest m")
      ->check(CLI::Range(2, 12));
  verify_cmd->add_option("--seed", verify.seed, "suite seed");
  verify_cmd->add_option("--witness-budget", verify.witness_budget,
                         "search budget per pairwise loss")
      ->check(CLI::PositiveNumber);
  verify_cmd->add_option("--report", verify.report_path,
                         "write the JSON report here");

  CurveOptions curve;
  CLI::App* curve_cmd = app.add_subcommand(
      "curve", "learning curve on synthetic data against the best risk");
  curve_cmd->add_option("--labels,-m", curve.labels, "label count")
      ->check(CLI::Range(2, 12));
  curve_cmd->add_option("--noise-sd", curve.noise_sd, "latent noise sd")
      ->check(CLI::NonNegativeNumber);
  curve_cmd->add_flag("--dependent", curve.dependent, "random label mixing");
  curve_cmd->add_option("--model-seed", curve.model_seed,
                        "model parameter seed");
  curve_cmd->add_option("--data-seed", curve.data_seed,
                        "instance stream seed");
  curve_cmd->add_option("--sizes", curve.sizes, "training sizes");
  curve_cmd->add_option("--repeats", curve.repeats,
                        "training repetitions per size")
      ->check(CLI::PositiveNumber);
  curve_cmd->add_option("--test-n", curve.test_n, "test instances")
      ->check(CLI::PositiveNumber);
  curve_cmd->add_option("--bayes-points", curve.bayes_points,
                        "instances in the best-risk estimate")
      ->check(CLI::PositiveNumber);
  curve_cmd->add_option("--bayes-reps", curve.bayes_reps,
                        "conditional samples per instance")
      ->check(CLI::PositiveNumber);
  curve_cmd
      ->add_option("--method", curve.method,
                   "wbr-ada | wbr-logreg | pairwise-log | pairwise-stumps")
      ->check(CLI::IsMember(
          {"wbr-ada", "wbr-logreg", "pairwise-log", "pairwise-stumps"}));
  curve_cmd->add_option("--weight", curve.weight, "constant | normalized")
      ->check(CLI::IsMember({"constant", "normalized"}));
  curve_cmd->add_option("--weight-c", curve.weight_c,
                        "constant weight value");
  curve_cmd->add_option("--grid", curve.grid,
                        "hyperparameter candidates (default per method)");
  curve_cmd->add_option("--train-seed", curve.train_seed,
                        "tuning split seed");
  curve_cmd->add_option("--out", curve.out_path, "write the curve CSV here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (gen_cmd->parsed()) return run_generate(gen);
    if (train_cmd->parsed()) return run_train(train);
    if (eval_cmd->parsed()) return run_eval(eval);
    if (verify_cmd->parsed()) return run_verify(verify);
    if (curve_cmd->parsed()) return run_curve(curve);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
