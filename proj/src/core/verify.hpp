#ifndef MLRANK_CORE_VERIFY_HPP_
#define MLRANK_CORE_VERIFY_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace mlrank {

// Randomized verification suites over exact conditional distributions. Every
// trial draws its own substream from the suite seed, so results do not depend
// on the worker count.
struct VerifyOptions {
  long trials = 200;
  int min_labels = 2;
  int max_labels = 5;
  std::uint64_t seed = 1;
  long witness_budget = 10000;  // pairwise-inconsistency search, per loss
};

struct SuiteResult {
  std::string name;
  long trials = 0;
  long checks = 0;       // individual comparisons across all trials
  long violations = 0;   // comparisons beyond tolerance
  double max_discrepancy = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string notes;
};

// Mass-table identities: transpose symmetry, pair masses summing to the
// expected weight, marginal complements, and the marginal-difference form of
// the pair-mass difference.
SuiteResult run_identity_suite(const VerifyOptions& options);

// Pairwise regret decomposition: the closed-form conditional regret equals
// risk minus Bayes risk, and the marginal-mass ranker attains regret zero.
SuiteResult run_decomposition_suite(const VerifyOptions& options);

// Bipartite reduction: bipartite regret times W m^2 / 2 reproduces the rank
// regret for arbitrary scores.
SuiteResult run_reduction_suite(const VerifyOptions& options);

// Rank regret bounded by factor * m sqrt(m W) * sqrt(univariate surrogate
// regret), factor sqrt(6)/4 for exp and sqrt(2)/2 for log.
SuiteResult run_surrogate_bound_suite(const VerifyOptions& options);

// Pointwise univariate surrogate minimizers induce a zero-regret ranking.
SuiteResult run_consistency_suite(const VerifyOptions& options);

// Searches for distributions whose pairwise-surrogate minimizer misorders a
// pair (both losses, three labels); passing means a witness was found for
// each loss and the univariate minimizer stays correct on those same
// distributions.
SuiteResult run_inconsistency_suite(const VerifyOptions& options);

std::vector<SuiteResult> run_all_suites(const VerifyOptions& options);

bool all_passed(const std::vector<SuiteResult>& results);

// Machine-readable report: {"passed": ..., "suites": [...]}.
std::string suites_to_json(const std::vector<SuiteResult>& results);

}  // namespace mlrank

#endif  // MLRANK_CORE_VERIFY_HPP_
