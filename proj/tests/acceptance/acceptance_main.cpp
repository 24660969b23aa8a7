// Release gate: every blocking property with its full budget and tolerance.
// Each criterion prints one [PASS]/[FAIL]/[SKIP] line; any failure makes the
// process exit nonzero. Criterion 9 needs converted benchmark datasets and
// is skipped when they are absent.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "core/learners.hpp"
#include "core/oracle.hpp"
#include "core/parallel.hpp"
#include "core/rng.hpp"
#include "core/synthdata.hpp"
#include "core/train.hpp"
#include "core/verify.hpp"
#include "core/wbr.hpp"

namespace {

using namespace mlrank;

struct Outcome {
  enum Status { kPass, kFail, kSkip } status = kFail;
  std::string detail;
};

Outcome pass(std::string detail) { return {Outcome::kPass, std::move(detail)}; }
Outcome fail(std::string detail) { return {Outcome::kFail, std::move(detail)}; }
Outcome skip(std::string detail) { return {Outcome::kSkip, std::move(detail)}; }

std::string num(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.6g", value);
  return buffer;
}

double mean_of(const std::vector<double>& values) {
  return std::accumulate(values.begin(), values.end(), 0.0) /
         static_cast<double>(values.size());
}

Scorer scorer_of(const ModelFile& file) {
  return [&file](std::span<const double> x) { return file.predict(x); };
}

std::vector<double> fd_gradient(const Objective& objective,
                                std::vector<double> x, double step = 1e-5) {
  std::vector<double> grad(x.size());
  std::vector<double> scratch(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double saved = x[i];
    x[i] = saved + step;
    const double up = objective(x, scratch);
    x[i] = saved - step;
    const double down = objective(x, scratch);
    x[i] = saved;
    grad[i] = (up - down) / (2.0 * step);
  }
  return grad;
}

bool gradients_close(std::span<const double> a, std::span<const double> b,
                     double rel, double floor, double* worst) {
  bool ok = true;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double scale = std::max({std::fabs(a[i]), std::fabs(b[i]), floor});
    const double gap = std::fabs(a[i] - b[i]) / scale;
    if (worst != nullptr) *worst = std::max(*worst, gap);
    if (gap > rel) ok = false;
  }
  return ok;
}

// ---- 1. mass-table identities at full budget ----

Outcome criterion_identities() {
  long checks = 0;
  double worst = 0.0;
  for (int m = 2; m <= 5; ++m) {
    VerifyOptions options;
    options.trials = 10000;
    options.min_labels = m;
    options.max_labels = m;
    options.seed = 101;
    const SuiteResult result = run_identity_suite(options);
    checks += result.checks;
    worst = std::max(worst, result.max_discrepancy);
    if (!result.passed) {
      return fail("m=" + std::to_string(m) + ": " +
                  std::to_string(result.violations) + " violations, max " +
                  num(result.max_discrepancy));
    }
  }
  return pass(std::to_string(checks) + " checks, max discrepancy " +
              num(worst) + " (tol 1e-12)");
}

// ---- 2. closed-form regret equals risk minus Bayes risk ----

Outcome criterion_decomposition() {
  VerifyOptions options;
  options.trials = 10000;
  options.min_labels = 2;
  options.max_labels = 5;
  options.seed = 102;
  const SuiteResult result = run_decomposition_suite(options);
  if (!result.passed) {
    return fail(std::to_string(result.violations) + " violations, max " +
                num(result.max_discrepancy));
  }
  return pass(std::to_string(result.checks) + " checks, max discrepancy " +
              num(result.max_discrepancy) + " (tol 1e-12)");
}

// ---- 3. scaled bipartite regret dominates, equality without ties ----

Outcome criterion_reduction() {
  constexpr long kTrials = 10000;
  constexpr double kTol = 1e-12;
  struct Stats {
    long order_violations = 0;
    long equality_checks = 0;
    long equality_violations = 0;
    long degenerate = 0;
    double worst = 0.0;
  };
  std::vector<Stats> stats(kTrials);
  const std::uint64_t seed = derive_seed(103, 0);
  parallel_for(0, kTrials, [&stats, seed](long t) {
    Rng rng = substream(seed, static_cast<std::uint64_t>(t));
    const int m = 2 + static_cast<int>(t % 4);
    const ConditionalLabelDistribution dist = random_distribution(m, rng);
    const WeightSpec spec = random_weight_spec(m, rng);
    const DeltaTable table = compute_deltas(dist, spec);
    Stats& s = stats[static_cast<std::size_t>(t)];
    if (table.w_total() <= 0.0) {
      ++s.degenerate;
      return;
    }
    const ScoreVector h = random_scores(m, rng);
    const double rank_regret = regret_conditional(table, h);
    const double scaled = bipartite_regret(reduce_to_bipartite(table), h) *
                          table.w_total() * m * m / 2.0;
    if (scaled < rank_regret - kTol) {
      ++s.order_violations;
      s.worst = std::max(s.worst, rank_regret - scaled);
    }
    bool tied = false;
    for (int i = 0; i < m && !tied; ++i) {
      for (int j = i + 1; j < m && !tied; ++j) {
        tied = table.single(i, 1) == table.single(j, 1) || h[i] == h[j];
      }
    }
    if (!tied) {
      ++s.equality_checks;
      const double gap = std::fabs(scaled - rank_regret);
      s.worst = std::max(s.worst, gap);
      if (gap > kTol) ++s.equality_violations;
    }
  });
  Stats total;
  for (const Stats& s : stats) {
    total.order_violations += s.order_violations;
    total.equality_checks += s.equality_checks;
    total.equality_violations += s.equality_violations;
    total.degenerate += s.degenerate;
    total.worst = std::max(total.worst, s.worst);
  }
  if (total.order_violations > 0 || total.equality_violations > 0) {
    return fail(std::to_string(total.order_violations) + " order and " +
                std::to_string(total.equality_violations) +
                " equality violations, worst gap " + num(total.worst));
  }
  return pass(std::to_string(kTrials - total.degenerate) + " triples, " +
              std::to_string(total.equality_checks) +
              " tie-free equality checks, worst gap " + num(total.worst) +
              " (tol 1e-12)");
}

// ---- 4. surrogate regret bound at full budget ----

Outcome criterion_bound() {
  long checks = 0;
  double worst = 0.0;
  for (int m = 2; m <= 5; ++m) {
    VerifyOptions options;
    options.trials = 10000;
    options.min_labels = m;
    options.max_labels = m;
    options.seed = 104;
    const SuiteResult result = run_surrogate_bound_suite(options);
    checks += result.checks;
    worst = std::max(worst, result.max_discrepancy);
    if (!result.passed) {
      return fail("m=" + std::to_string(m) + ": " +
                  std::to_string(result.violations) + " violations");
    }
  }
  return pass(std::to_string(checks) +
              " bound checks (both losses), worst overshoot " + num(worst) +
              " (slack 1e-9)");
}

// ---- 5. univariate minimizers induce the Bayes ordering ----

Outcome criterion_consistency() {
  VerifyOptions options;
  options.trials = 1000;
  options.min_labels = 2;
  options.max_labels = 5;
  options.seed = 105;
  const SuiteResult result = run_consistency_suite(options);
  if (!result.passed) {
    return fail(std::to_string(result.violations) + " ordering violations");
  }
  return pass(std::to_string(result.checks) + " checks, zero violations");
}

// ---- 6. pairwise surrogates admit an inconsistency witness ----

Outcome criterion_witness() {
  std::string detail;
  for (PairwiseSurrogate phi :
       {PairwiseSurrogate::kExponential, PairwiseSurrogate::kLogistic}) {
    const char* name =
        phi == PairwiseSurrogate::kExponential ? "exp" : "logistic";
    const std::uint64_t seed = derive_seed(
        106, phi == PairwiseSurrogate::kExponential ? 0u : 1u);
    const InconsistencySearch search =
        find_inconsistency_witness(phi, 3, 10000, seed);
    if (!search.witness.has_value()) {
      return fail(std::string(name) + ": no witness within 10000 trials");
    }
    const InconsistencyWitness& w = *search.witness;
    // The pairwise minimizer misorders (i, j); the univariate minimizers on
    // the same distribution must not.
    const DeltaTable table = compute_deltas(w.dist, WeightSpec::constant(1.0));
    for (UnivariateKind kind : {UnivariateKind::kExp, UnivariateKind::kLog}) {
      const ScoreVector h = univariate_pointwise_minimizer(kind, table);
      const double regret = std::fabs(regret_conditional(table, h));
      if (regret > 1e-12) {
        return fail(std::string(name) +
                    ": univariate minimizer also misorders, regret " +
                    num(regret));
      }
    }
    if (!detail.empty()) detail += "; ";
    detail += std::string(name) + " witness at trial " +
              std::to_string(w.trial) + " pair (" + std::to_string(w.label_i) +
              "," + std::to_string(w.label_j) + ") delta gap " +
              num(w.delta_diff) + " score gap " + num(w.h_diff) + " probs [";
    for (std::size_t k = 0; k < w.dist.probs.size(); ++k) {
      if (k > 0) detail += ",";
      char buffer[32];
      std::snprintf(buffer, sizeof(buffer), "%.17g", w.dist.probs[k]);
      detail += buffer;
    }
    detail += "]";
  }
  return pass(detail);
}

// ---- 7. learning curve converges to the Monte-Carlo Bayes risk ----

struct CurvePoint {
  long n = 0;
  double mean_loss = 0.0;
};

std::vector<CurvePoint> learning_curve(const SyntheticModel& model,
                                       const MultilabelDataset& test,
                                       Method method, double hyper,
                                       const WeightSpec& weight,
                                       const std::vector<long>& sizes,
                                       int repeats, std::uint64_t seed) {
  std::vector<CurvePoint> curve;
  for (long n : sizes) {
    std::vector<double> losses;
    for (int r = 0; r < repeats; ++r) {
      const MultilabelDataset train =
          sample_dataset(model, n, derive_seed(seed, static_cast<std::uint64_t>(r)));
      TrainConfig config;
      config.method = method;
      config.weight = weight;
      const ModelFile file = train_fixed(train, config, hyper);
      losses.push_back(
          evaluate(scorer_of(file), test, weight).mean_rank_loss);
    }
    curve.push_back({n, mean_of(losses)});
  }
  return curve;
}

Outcome criterion_convergence() {
  const WeightSpec weight = WeightSpec::pairwise_normalized();
  const SyntheticModel model = sample_model(5, false, 7001, 0.5);
  const MultilabelDataset test =
      sample_dataset(model, 10000, derive_seed(107, 999));
  const McEstimate bayes =
      mc_bayes_risk(model, weight, 2000, 10000, derive_seed(107, 998));
  const std::vector<CurvePoint> curve = learning_curve(
      model, test, Method::kWbrLogreg, 0.01, weight, {100, 400, 1600, 4000},
      10, derive_seed(107, 1));
  for (std::size_t i = 1; i < curve.size(); ++i) {
    if (curve[i].mean_loss > curve[i - 1].mean_loss + 1e-9) {
      return fail("mean loss rises from n=" + std::to_string(curve[i - 1].n) +
                  " (" + num(curve[i - 1].mean_loss) + ") to n=" +
                  std::to_string(curve[i].n) + " (" + num(curve[i].mean_loss) +
                  ")");
    }
  }
  const double gap = curve.back().mean_loss - bayes.value;
  if (std::fabs(gap) > 0.03) {
    return fail("n=4000 mean " + num(curve.back().mean_loss) +
                " vs Bayes estimate " + num(bayes.value) + " (se " +
                num(bayes.std_error) + "), gap " + num(gap) +
                " exceeds 0.03");
  }
  std::string detail = "curve";
  for (const CurvePoint& point : curve) {
    detail += " n=" + std::to_string(point.n) + ":" + num(point.mean_loss);
  }
  detail += ", Bayes " + num(bayes.value) + " (se " + num(bayes.std_error) +
            "), final gap " + num(gap);
  return pass(detail);
}

// ---- 8. univariate route matches the pairwise route on dependent labels ----

Outcome criterion_contrast() {
  const WeightSpec weight = WeightSpec::pairwise_normalized();
  const SyntheticModel model = sample_model(5, true, 8001, 0.5);
  const MultilabelDataset test =
      sample_dataset(model, 10000, derive_seed(108, 999));
  std::vector<double> wbr_losses;
  std::vector<double> pairwise_losses;
  for (int r = 0; r < 10; ++r) {
    const MultilabelDataset train =
        sample_dataset(model, 4000, derive_seed(108, static_cast<std::uint64_t>(r)));
    TrainConfig config;
    config.weight = weight;
    config.method = Method::kWbrLogreg;
    const ModelFile wbr = train_fixed(train, config, 0.01);
    wbr_losses.push_back(
        evaluate(scorer_of(wbr), test, weight).mean_rank_loss);
    config.method = Method::kPairwiseLinear;
    const ModelFile pairwise = train_fixed(train, config, 2000);
    pairwise_losses.push_back(
        evaluate(scorer_of(pairwise), test, weight).mean_rank_loss);
  }
  const double wbr_mean = mean_of(wbr_losses);
  const double pairwise_mean = mean_of(pairwise_losses);
  if (wbr_mean > pairwise_mean + 0.01) {
    return fail("wbr-logreg mean " + num(wbr_mean) +
                " exceeds pairwise-log mean " + num(pairwise_mean) +
                " + 0.01 over 10 paired seeds");
  }
  return pass("n=4000, 10 paired seeds: wbr-logreg " + num(wbr_mean) +
              " vs pairwise-log " + num(pairwise_mean));
}

// ---- 9. benchmark sanity band (needs converted datasets) ----

Outcome criterion_benchmarks() {
  namespace fs = std::filesystem;
  const char* env = std::getenv("MLRANK_BENCH_DIR");
  const fs::path dir = env != nullptr ? fs::path(env)
                                      : fs::path("data") / "benchmarks";
  struct Bench {
    const char* name;
    double expected;
  };
  const Bench benches[] = {{"emotions", 0.1657}, {"scene", 0.0793}};
  for (const Bench& bench : benches) {
    if (!fs::exists(dir / (std::string(bench.name) + "-train.data")) ||
        !fs::exists(dir / (std::string(bench.name) + "-test.data"))) {
      return skip("no converted datasets under " + dir.string() +
                  " (set MLRANK_BENCH_DIR)");
    }
  }
  std::string detail;
  for (const Bench& bench : benches) {
    const MultilabelDataset train = read_sparse(
        (dir / (std::string(bench.name) + "-train.data")).string());
    const MultilabelDataset test =
        read_sparse((dir / (std::string(bench.name) + "-test.data")).string());
    TrainConfig config;
    config.method = Method::kWbrLogreg;
    config.weight = WeightSpec::pairwise_normalized();
    config.seed = 109;
    const TrainOutcome outcome = train_method(train, config);
    const double loss =
        evaluate(scorer_of(outcome.model), test, config.weight).mean_rank_loss;
    if (std::fabs(loss - bench.expected) > 0.05) {
      return fail(std::string(bench.name) + " rank loss " + num(loss) +
                  " outside " + num(bench.expected) + " +/- 0.05");
    }
    if (!detail.empty()) detail += "; ";
    detail += std::string(bench.name) + " " + num(loss) + " (reference " +
              num(bench.expected) + ")";
  }
  return pass(detail);
}

// ---- 10. analytic gradients and boosting traces ----

Outcome criterion_numerics() {
  Rng rng(1010);
  double worst = 0.0;

  // Weighted logistic objective against central differences.
  const int d = 3;
  std::vector<std::vector<double>> storage;
  storage.reserve(30);
  std::vector<WeightedBinarySample> samples;
  for (int k = 0; k < 30; ++k) {
    std::vector<double> x(d);
    for (double& v : x) v = rng.normal();
    storage.push_back(std::move(x));
    samples.push_back({std::span<const double>(storage.back()),
                       rng.uniform() < 0.5 ? SignedLabel::kNegative
                                           : SignedLabel::kPositive,
                       0.1 + rng.uniform()});
  }
  const Objective logistic = make_logreg_objective(samples, 0.37);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> point(d + 1);
    for (double& v : point) v = rng.normal();
    std::vector<double> grad(point.size());
    logistic(point, grad);
    const std::vector<double> numeric = fd_gradient(logistic, point);
    if (!gradients_close(grad, numeric, 1e-5, 1e-7, &worst)) {
      return fail("logistic gradient off by " + num(worst) + " relative");
    }
  }

  // Pairwise conditional risk gradients, both surrogates.
  for (int trial = 0; trial < 100; ++trial) {
    const int m = 2 + trial % 4;
    const ConditionalLabelDistribution dist = random_distribution(m, rng);
    const WeightSpec spec = random_weight_spec(m, rng);
    const DeltaTable table = compute_deltas(dist, spec);
    const ScoreVector h = random_scores(m, rng);
    for (PairwiseSurrogate phi :
         {PairwiseSurrogate::kExponential, PairwiseSurrogate::kLogistic}) {
      const Objective risk = [phi, &table](std::span<const double> x,
                                           std::span<double> grad) {
        ScoreVector scores;
        scores.scores.assign(x.begin(), x.end());
        const std::vector<double> g =
            pairwise_conditional_risk_gradient(phi, table, scores);
        std::copy(g.begin(), g.end(), grad.begin());
        return pairwise_conditional_risk(phi, table, scores);
      };
      std::vector<double> point(h.scores);
      std::vector<double> grad(point.size());
      risk(point, grad);
      const std::vector<double> numeric = fd_gradient(risk, point);
      if (!gradients_close(grad, numeric, 1e-5, 1e-7, &worst)) {
        return fail("pairwise risk gradient off by " + num(worst) +
                    " relative");
      }
    }
  }

  // Boosting traces must never rise on the acceptance datasets.
  long traces = 0;
  for (bool dependent : {false, true}) {
    const SyntheticModel model =
        sample_model(5, dependent, dependent ? 8001 : 7001, 0.5);
    const MultilabelDataset data =
        sample_dataset(model, 400, derive_seed(110, dependent ? 1 : 0));
    const WeightSpec weight = WeightSpec::pairwise_normalized();
    const auto problems = decompose(data, weight);
    for (const auto& problem : problems) {
      const BoostResult result = train_ada_stumps(problem, 40);
      for (std::size_t t = 1; t < result.loss_trace.size(); ++t) {
        if (result.loss_trace[t] > result.loss_trace[t - 1] + 1e-12) {
          return fail("per-label boosting trace rises at round " +
                      std::to_string(t));
        }
      }
      ++traces;
    }
    const PairwiseStumpResult pairwise =
        train_pairwise_stumps(data, weight, 40);
    for (std::size_t t = 1; t < pairwise.loss_trace.size(); ++t) {
      if (pairwise.loss_trace[t] > pairwise.loss_trace[t - 1] + 1e-12) {
        return fail("pairwise boosting trace rises at round " +
                    std::to_string(t));
      }
    }
    ++traces;
  }
  return pass("200 gradient points within 1e-5 relative (worst " +
              num(worst) + "), " + std::to_string(traces) +
              " non-increasing traces");
}

struct Criterion {
  int number;
  const char* label;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "mass-identities", criterion_identities},
      {2, "regret-decomposition", criterion_decomposition},
      {3, "bipartite-reduction", criterion_reduction},
      {4, "surrogate-regret-bound", criterion_bound},
      {5, "univariate-consistency", criterion_consistency},
      {6, "pairwise-inconsistency-witness", criterion_witness},
      {7, "synthetic-convergence", criterion_convergence},
      {8, "dependent-contrast", criterion_contrast},
      {9, "benchmark-band", criterion_benchmarks},
      {10, "gradients-and-traces", criterion_numerics},
  };
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));

  int failures = 0;
  for (const Criterion& criterion : criteria) {
    if (!wanted.empty() && wanted.count(criterion.number) == 0) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criterion.run();
    } catch (const std::exception& e) {
      outcome = fail(std::string("exception: ") + e.what());
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    const char* tag = outcome.status == Outcome::kPass   ? "[PASS]"
                      : outcome.status == Outcome::kSkip ? "[SKIP]"
                                                         : "[FAIL]";
    std::printf("%s %2d %s: %s (%.1fs)\n", tag, criterion.number,
                criterion.label, outcome.detail.c_str(), seconds);
    std::fflush(stdout);
    if (outcome.status == Outcome::kFail) ++failures;
  }
  if (failures > 0) {
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
  }
  return 0;
}
