#include <doctest.h>

#include <cstdlib>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "core/verify.hpp"
#include "test_util.hpp"

using namespace mlrank;
using testutil::error_code_of;

namespace {

VerifyOptions small_options() {
  VerifyOptions options;
  options.trials = 60;
  options.min_labels = 2;
  options.max_labels = 5;
  options.seed = 2026;
  return options;
}

using SuiteFn = SuiteResult (*)(const VerifyOptions&);

const std::vector<std::pair<SuiteFn, std::string>>& randomized_suites() {
  static const std::vector<std::pair<SuiteFn, std::string>> suites = {
      {run_identity_suite, "mass-identities"},
      {run_decomposition_suite, "regret-decomposition"},
      {run_reduction_suite, "bipartite-reduction"},
      {run_surrogate_bound_suite, "surrogate-regret-bound"},
      {run_consistency_suite, "univariate-consistency"},
  };
  return suites;
}

}  // namespace

TEST_CASE("suite options are validated") {
  VerifyOptions options = small_options();
  options.trials = 0;
  CHECK(error_code_of([&] { run_identity_suite(options); }) ==
        ErrorCode::kInvalidArgument);
  options = small_options();
  options.min_labels = 1;
  CHECK(error_code_of([&] { run_identity_suite(options); }) ==
        ErrorCode::kInvalidArgument);
  options = small_options();
  options.max_labels = 13;
  CHECK(error_code_of([&] { run_identity_suite(options); }) ==
        ErrorCode::kInvalidArgument);
  options = small_options();
  options.min_labels = 4;
  options.max_labels = 3;
  CHECK(error_code_of([&] { run_identity_suite(options); }) ==
        ErrorCode::kInvalidArgument);
  options = small_options();
  options.witness_budget = 0;
  CHECK(error_code_of([&] { run_inconsistency_suite(options); }) ==
        ErrorCode::kInvalidArgument);
}

TEST_CASE("randomized suites pass on exact conditional distributions") {
  const VerifyOptions options = small_options();
  for (const auto& [fn, name] : randomized_suites()) {
    CAPTURE(name);
    const SuiteResult result = fn(options);
    CHECK(result.name == name);
    CHECK(result.trials == options.trials);
    CHECK(result.checks > 0);
    CHECK(result.violations == 0);
    CHECK(result.passed);
    CHECK(result.max_discrepancy <= result.tolerance);
    CHECK(result.notes.find("max discrepancy") == 0);
  }
}

TEST_CASE("suite tallies are identical for any worker count") {
  VerifyOptions options = small_options();
  options.trials = 40;
  setenv("MLRANK_WORKERS", "1", 1);
  std::vector<SuiteResult> serial;
  for (const auto& [fn, name] : randomized_suites())
    serial.push_back(fn(options));
  setenv("MLRANK_WORKERS", "5", 1);
  std::vector<SuiteResult> threaded;
  for (const auto& [fn, name] : randomized_suites())
    threaded.push_back(fn(options));
  unsetenv("MLRANK_WORKERS");
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].checks == threaded[i].checks);
    CHECK(serial[i].violations == threaded[i].violations);
    CHECK(serial[i].max_discrepancy == threaded[i].max_discrepancy);
    CHECK(serial[i].passed == threaded[i].passed);
  }
}

TEST_CASE("suites are reproducible for a fixed seed") {
  const VerifyOptions options = small_options();
  const SuiteResult a = run_surrogate_bound_suite(options);
  const SuiteResult b = run_surrogate_bound_suite(options);
  CHECK(a.checks == b.checks);
  CHECK(a.max_discrepancy == b.max_discrepancy);
  CHECK(a.notes == b.notes);
}

TEST_CASE("the full run reports six suites in a fixed order") {
  VerifyOptions options = small_options();
  options.trials = 20;
  options.witness_budget = 400;
  const std::vector<SuiteResult> results = run_all_suites(options);
  REQUIRE(results.size() == 6);
  CHECK(results[0].name == "mass-identities");
  CHECK(results[1].name == "regret-decomposition");
  CHECK(results[2].name == "bipartite-reduction");
  CHECK(results[3].name == "surrogate-regret-bound");
  CHECK(results[4].name == "univariate-consistency");
  CHECK(results[5].name == "pairwise-inconsistency");
}

TEST_CASE("the witness search reports its outcome either way") {
  VerifyOptions options = small_options();
  options.witness_budget = 400;
  const SuiteResult result = run_inconsistency_suite(options);
  CHECK(result.name == "pairwise-inconsistency");
  CHECK(result.trials > 0);
  CHECK(result.notes.find("exp") != std::string::npos);
  CHECK(result.notes.find("logistic") != std::string::npos);
  const bool exp_found =
      result.notes.find("exp: witness at trial") != std::string::npos;
  const bool exp_missing =
      result.notes.find("exp: no witness") != std::string::npos;
  CHECK(exp_found != exp_missing);
  if (!exp_found || result.notes.find("logistic: witness") ==
                        std::string::npos) {
    CHECK(!result.passed);
  }
}

TEST_CASE("an exhausted witness budget is an explicit failure") {
  VerifyOptions options = small_options();
  options.seed = 77;
  options.witness_budget = 1;
  const SuiteResult result = run_inconsistency_suite(options);
  if (!result.passed) {
    CHECK(result.notes.find("no witness within 1 trials") !=
          std::string::npos);
  }
}

TEST_CASE("all_passed requires every suite to pass") {
  CHECK(all_passed({}));
  SuiteResult good;
  good.passed = true;
  SuiteResult bad;
  bad.passed = false;
  CHECK(all_passed({good}));
  CHECK(!all_passed({good, bad}));
}

TEST_CASE("the json report carries every suite field") {
  SuiteResult a;
  a.name = "mass-identities";
  a.trials = 12;
  a.checks = 340;
  a.violations = 0;
  a.max_discrepancy = 3.25e-15;
  a.tolerance = 1e-12;
  a.passed = true;
  a.notes = "max discrepancy 3.25e-15";
  SuiteResult b;
  b.name = "pairwise-inconsistency";
  b.trials = 7;
  b.checks = 4;
  b.violations = 1;
  b.max_discrepancy = 0.125;
  b.tolerance = 1e-12;
  b.passed = false;
  b.notes = "exp: no witness within 7 trials";

  const std::string text = suites_to_json({a, b});
  CHECK(text.back() == '\n');
  const nlohmann::json doc = nlohmann::json::parse(text);
  CHECK(doc.at("passed") == false);
  REQUIRE(doc.at("suites").size() == 2);
  const nlohmann::json& first = doc.at("suites")[0];
  CHECK(first.at("name") == "mass-identities");
  CHECK(first.at("trials") == 12);
  CHECK(first.at("checks") == 340);
  CHECK(first.at("violations") == 0);
  CHECK(first.at("max_discrepancy") == 3.25e-15);
  CHECK(first.at("tolerance") == 1e-12);
  CHECK(first.at("passed") == true);
  const nlohmann::json& second = doc.at("suites")[1];
  CHECK(second.at("name") == "pairwise-inconsistency");
  CHECK(second.at("violations") == 1);
  CHECK(second.at("passed") == false);
  CHECK(second.at("notes") == "exp: no witness within 7 trials");
}
