#include "core/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <utility>

#include <json.hpp>

#include "core/oracle.hpp"
#include "core/parallel.hpp"

namespace mlrank {
namespace {

constexpr double kExactTolerance = 1e-12;
constexpr double kBoundSlack = 1e-9;

// Suite tags feeding derive_seed so suites never share substreams.
enum : std::uint64_t {
  kTagIdentity = 101,
  kTagDecomposition = 102,
  kTagReduction = 103,
  kTagBound = 104,
  kTagConsistency = 105,
  kTagWitnessExp = 106,
  kTagWitnessLog = 107,
};

struct TrialStats {
  long checks = 0;
  long violations = 0;
  double max_discrepancy = 0.0;

  void record(double discrepancy, double tolerance) {
    ++checks;
    if (discrepancy > max_discrepancy) max_discrepancy = discrepancy;
    if (discrepancy > tolerance) ++violations;
  }
};

void check_options(const VerifyOptions& options) {
  require(options.trials > 0, ErrorCode::kInvalidArgument,
          "trial count must be positive");
  require(options.min_labels >= 2 && options.max_labels >= options.min_labels &&
              options.max_labels <= 12,
          ErrorCode::kInvalidArgument, "label range must sit inside [2, 12]");
  require(options.witness_budget > 0, ErrorCode::kInvalidArgument,
          "witness budget must be positive");
}

int trial_labels(const VerifyOptions& options, long trial) {
  const int span = options.max_labels - options.min_labels + 1;
  return options.min_labels + static_cast<int>(trial % span);
}

std::string format_number(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.6g", value);
  return buffer;
}

// Runs `body(m, rng, stats)` once per trial on its own substream and folds
// the per-trial tallies in index order.
template <typename Body>
SuiteResult run_randomized(std::string name, const VerifyOptions& options,
                           double tolerance, std::uint64_t tag,
                           const Body& body) {
  check_options(options);
  std::vector<TrialStats> stats(static_cast<std::size_t>(options.trials));
  const std::uint64_t suite_seed = derive_seed(options.seed, tag);
  parallel_for(0, options.trials, [&](long t) {
    Rng rng = substream(suite_seed, static_cast<std::uint64_t>(t));
    TrialStats local;
    body(trial_labels(options, t), rng, local, tolerance);
    stats[static_cast<std::size_t>(t)] = local;
  });
  SuiteResult out;
  out.name = std::move(name);
  out.trials = options.trials;
  out.tolerance = tolerance;
  for (const TrialStats& s : stats) {
    out.checks += s.checks;
    out.violations += s.violations;
    out.max_discrepancy = std::max(out.max_discrepancy, s.max_discrepancy);
  }
  out.passed = out.violations == 0;
  out.notes = "max discrepancy " + format_number(out.max_discrepancy);
  return out;
}

struct TrialDraw {
  ConditionalLabelDistribution dist;
  WeightSpec spec;
  DeltaTable table;
};

TrialDraw draw_trial(int m, Rng& rng) {
  ConditionalLabelDistribution dist = random_distribution(m, rng);
  WeightSpec spec = random_weight_spec(m, rng);
  DeltaTable table = compute_deltas(dist, spec);
  return {std::move(dist), std::move(spec), std::move(table)};
}

}  // namespace

SuiteResult run_identity_suite(const VerifyOptions& options) {
  return run_randomized(
      "mass-identities", options, kExactTolerance, kTagIdentity,
      [](int m, Rng& rng, TrialStats& stats, double tol) {
        TrialDraw draw = draw_trial(m, rng);
        const DeltaTable& t = draw.table;
        const double w = t.w_total();
        for (int i = 0; i < m; ++i) {
          stats.record(std::fabs(t.single(i, 1) + t.single(i, 0) - w), tol);
          for (int j = 0; j < m; ++j) {
            if (i == j) continue;
            for (int u = 0; u < 2; ++u) {
              for (int v = 0; v < 2; ++v) {
                stats.record(std::fabs(t.pair(i, j, u, v) - t.pair(j, i, v, u)),
                             tol);
              }
            }
          }
        }
        for (int i = 0; i < m; ++i) {
          for (int j = i + 1; j < m; ++j) {
            double sum = 0.0;
            for (int u = 0; u < 2; ++u) {
              for (int v = 0; v < 2; ++v) sum += t.pair(i, j, u, v);
            }
            stats.record(std::fabs(sum - w), tol);
            const double marginal_gap = t.single(i, 1) - t.single(j, 1);
            const double pair_gap = t.pair(i, j, 1, 0) - t.pair(i, j, 0, 1);
            stats.record(std::fabs(marginal_gap - pair_gap), tol);
          }
        }
      });
}

SuiteResult run_decomposition_suite(const VerifyOptions& options) {
  return run_randomized(
      "regret-decomposition", options, kExactTolerance, kTagDecomposition,
      [](int m, Rng& rng, TrialStats& stats, double tol) {
        TrialDraw draw = draw_trial(m, rng);
        const ScoreVector h = random_scores(m, rng);
        const double closed = regret_conditional(draw.table, h);
        const double direct = conditional_rank_risk(draw.table, h) -
                              bayes_rank_risk(draw.table);
        stats.record(std::fabs(closed - direct), tol);
        stats.record(std::max(0.0, -closed), tol);
        const double at_bayes =
            regret_conditional(draw.table, bayes_ranker(draw.table));
        stats.record(std::fabs(at_bayes), tol);
      });
}

SuiteResult run_reduction_suite(const VerifyOptions& options) {
  return run_randomized(
      "bipartite-reduction", options, kExactTolerance, kTagReduction,
      [](int m, Rng& rng, TrialStats& stats, double tol) {
        TrialDraw draw = draw_trial(m, rng);
        const ScoreVector h = random_scores(m, rng);
        const double rank_regret = regret_conditional(draw.table, h);
        const double w = draw.table.w_total();
        if (w == 0.0) {
          stats.record(std::fabs(rank_regret), tol);
          return;
        }
        const BipartiteReduction reduction = reduce_to_bipartite(draw.table);
        const double scaled =
            bipartite_regret(reduction, h) * (w * m * m / 2.0);
        stats.record(std::fabs(scaled - rank_regret), tol);
      });
}

SuiteResult run_surrogate_bound_suite(const VerifyOptions& options) {
  return run_randomized(
      "surrogate-regret-bound", options, kBoundSlack, kTagBound,
      [](int m, Rng& rng, TrialStats& stats, double tol) {
        TrialDraw draw = draw_trial(m, rng);
        const ScoreVector h = random_scores(m, rng);
        for (UnivariateKind kind : {UnivariateKind::kExp, UnivariateKind::kLog}) {
          const RegretBoundReport report =
              check_regret_bound(kind, draw.table, h, tol);
          stats.record(std::max(0.0, report.lhs - report.rhs), tol);
        }
      });
}

SuiteResult run_consistency_suite(const VerifyOptions& options) {
  return run_randomized(
      "univariate-consistency", options, kExactTolerance, kTagConsistency,
      [](int m, Rng& rng, TrialStats& stats, double tol) {
        TrialDraw draw = draw_trial(m, rng);
        for (UnivariateKind kind : {UnivariateKind::kExp, UnivariateKind::kLog}) {
          const ScoreVector h = univariate_pointwise_minimizer(kind, draw.table);
          stats.record(std::fabs(regret_conditional(draw.table, h)), tol);
          // The induced ordering must agree with the marginal-mass ordering;
          // a strict inversion is a violation regardless of magnitude.
          for (int i = 0; i < m; ++i) {
            for (int j = i + 1; j < m; ++j) {
              const double gap =
                  draw.table.single(i, 1) - draw.table.single(j, 1);
              if ((gap > 0.0 && h[i] < h[j]) || (gap < 0.0 && h[i] > h[j])) {
                stats.record(std::fabs(gap) + tol, tol);
              } else {
                stats.record(0.0, tol);
              }
            }
          }
        }
      });
}

SuiteResult run_inconsistency_suite(const VerifyOptions& options) {
  check_options(options);
  SuiteResult out;
  out.name = "pairwise-inconsistency";
  out.tolerance = kExactTolerance;
  out.passed = true;

  const std::pair<PairwiseSurrogate, std::uint64_t> targets[] = {
      {PairwiseSurrogate::kExponential, kTagWitnessExp},
      {PairwiseSurrogate::kLogistic, kTagWitnessLog},
  };
  for (const auto& [phi, tag] : targets) {
    const char* phi_name =
        phi == PairwiseSurrogate::kExponential ? "exp" : "logistic";
    const InconsistencySearch search = find_inconsistency_witness(
        phi, 3, options.witness_budget, derive_seed(options.seed, tag));
    out.trials += search.tried;
    if (!out.notes.empty()) out.notes += "; ";
    if (!search.witness.has_value()) {
      out.passed = false;
      out.notes += std::string(phi_name) + ": no witness within " +
                   std::to_string(options.witness_budget) + " trials";
      continue;
    }
    const InconsistencyWitness& w = *search.witness;
    out.notes += std::string(phi_name) + ": witness at trial " +
                 std::to_string(w.trial) + " (pair gap " +
                 format_number(w.delta_diff) + ", score gap " +
                 format_number(w.h_diff) + ")";
    // The same distribution must stay unproblematic for the univariate route.
    const DeltaTable table = compute_deltas(w.dist, WeightSpec::constant(1.0));
    for (UnivariateKind kind : {UnivariateKind::kExp, UnivariateKind::kLog}) {
      const ScoreVector h = univariate_pointwise_minimizer(kind, table);
      const double regret = std::fabs(regret_conditional(table, h));
      ++out.checks;
      out.max_discrepancy = std::max(out.max_discrepancy, regret);
      if (regret > out.tolerance) {
        ++out.violations;
        out.passed = false;
      }
    }
  }
  return out;
}

std::vector<SuiteResult> run_all_suites(const VerifyOptions& options) {
  std::vector<SuiteResult> results;
  results.push_back(run_identity_suite(options));
  results.push_back(run_decomposition_suite(options));
  results.push_back(run_reduction_suite(options));
  results.push_back(run_surrogate_bound_suite(options));
  results.push_back(run_consistency_suite(options));
  results.push_back(run_inconsistency_suite(options));
  return results;
}

bool all_passed(const std::vector<SuiteResult>& results) {
  return std::all_of(results.begin(), results.end(),
                     [](const SuiteResult& r) { return r.passed; });
}

std::string suites_to_json(const std::vector<SuiteResult>& results) {
  nlohmann::json doc;
  doc["passed"] = all_passed(results);
  doc["suites"] = nlohmann::json::array();
  for (const SuiteResult& r : results) {
    doc["suites"].push_back({
        {"name", r.name},
        {"trials", r.trials},
        {"checks", r.checks},
        {"violations", r.violations},
        {"max_discrepancy", r.max_discrepancy},
        {"tolerance", r.tolerance},
        {"passed", r.passed},
        {"notes", r.notes},
    });
  }
  return doc.dump(2) + "\n";
}

}  // namespace mlrank
