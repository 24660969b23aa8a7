#ifndef MLRANK_CORE_ORACLE_HPP_
#define MLRANK_CORE_ORACLE_HPP_

#include <optional>
#include <vector>

#include "core/loss.hpp"
#include "core/rng.hpp"
#include "core/types.hpp"
#include "core/weights.hpp"

namespace mlrank {

// Explicit conditional label distribution P(y|x) over all 2^m outcomes.
// Outcome index k encodes the labeling by bits: y_i = (k >> i) & 1.
// Dense enumeration caps m at 20; this is a verification tool, not a
// production scorer.
struct ConditionalLabelDistribution {
  int m = 0;
  std::vector<double> probs;

  static ConditionalLabelDistribution create(int m, std::vector<double> probs);

  std::size_t outcomes() const { return probs.size(); }
  LabelVector outcome(std::size_t index) const;
  void validate() const;
};

// All weighted pair masses Delta_ij^{uv}, marginal masses Delta_i^u, and the
// expected weight W for one conditional distribution and weight function.
// Index convention: pair(i, j, 1, 0) is the mass of {Y_i = 1, Y_j = 0}.
class DeltaTable {
 public:
  DeltaTable(int m, double w_max)
      : m_(m),
        w_max_(w_max),
        pair_(static_cast<std::size_t>(m) * m * 4, 0.0),
        single1_(m, 0.0),
        single0_(m, 0.0) {}

  int m() const { return m_; }
  double w_total() const { return w_total_; }
  double w_max() const { return w_max_; }

  double pair(int i, int j, int u, int v) const {
    return pair_[((static_cast<std::size_t>(i) * m_ + j) << 2) + (u << 1) + v];
  }
  double single(int i, int u) const { return u ? single1_[i] : single0_[i]; }
  const std::vector<double>& marginals() const { return single1_; }

 private:
  friend DeltaTable compute_deltas(const ConditionalLabelDistribution&,
                                   const WeightSpec&);
  double& pair_ref(int i, int j, int u, int v) {
    return pair_[((static_cast<std::size_t>(i) * m_ + j) << 2) + (u << 1) + v];
  }

  int m_;
  double w_max_;
  double w_total_ = 0.0;
  std::vector<double> pair_;
  std::vector<double> single1_;
  std::vector<double> single0_;
};

// Exact sums over all 2^m outcomes.
DeltaTable compute_deltas(const ConditionalLabelDistribution& dist,
                          const WeightSpec& spec);

// Expected rank loss of the scores h under the distribution behind `table`.
double conditional_rank_risk(const DeltaTable& table, const ScoreVector& h);

// Best achievable conditional rank risk: sum of min{Delta_ij^10, Delta_ij^01}.
double bayes_rank_risk(const DeltaTable& table);

// A Bayes-optimal scorer: the marginal masses Delta_i^1 themselves.
ScoreVector bayes_ranker(const DeltaTable& table);

// Rank regret computed directly from the marginal masses; equals
// conditional_rank_risk - bayes_rank_risk.
double regret_conditional(const DeltaTable& table, const ScoreVector& h);

// Regret of the multilabel univariate surrogate, with the per-label infimum
// in closed form (exp: 2 sqrt(Delta^1 Delta^0); log: W times the binary
// entropy of Delta^1 / W in nats).
double univariate_surrogate_regret(UnivariateKind kind, const DeltaTable& table,
                                   const ScoreVector& h);

// Single-label building block of the above: regret contribution of one score
// against masses (d1, d0).
double binary_surrogate_regret_term(UnivariateKind kind, double d1, double d0,
                                    double h);

// Per-label surrogate minimizers: exp 0.5*ln(d1/d0), log ln(d1/d0).
// Deterministic labels push the score to +/- cap (default matches the
// witness-search coordinate cap).
ScoreVector univariate_pointwise_minimizer(UnivariateKind kind,
                                           const DeltaTable& table,
                                           double cap = 50.0);

// The per-instance bipartite ranking problem: m pseudo-instances with
// uniform probability and positive-class rates eta_i = Delta_i^1 / W.
struct BipartiteReduction {
  int m = 0;
  std::vector<double> eta;
};

BipartiteReduction reduce_to_bipartite(const DeltaTable& table);

// Bipartite rank regret of h under the reduction; equals
// (2 / (W m^2)) * regret_conditional.
double bipartite_regret(const BipartiteReduction& reduction,
                        const ScoreVector& h);

struct RegretBoundReport {
  double lhs = 0.0;              // rank regret
  double rhs = 0.0;              // factor * C * sqrt(surrogate regret)
  double surrogate_regret = 0.0;
  double constant_c = 0.0;       // m sqrt(m W)
  double constant_c_wmax = 0.0;  // m sqrt(m w_max)
  bool holds = false;
};

// Checks the surrogate-regret bound (factor sqrt(6)/4 for exp, sqrt(2)/2 for
// log) with the conditional constant C = m sqrt(m W).
RegretBoundReport check_regret_bound(UnivariateKind kind,
                                     const DeltaTable& table,
                                     const ScoreVector& h, double slack = 1e-9);

// Conditional expected pairwise surrogate loss.
double pairwise_conditional_risk(PairwiseSurrogate phi, const DeltaTable& table,
                                 const ScoreVector& h);

std::vector<double> pairwise_conditional_risk_gradient(PairwiseSurrogate phi,
                                                       const DeltaTable& table,
                                                       const ScoreVector& h);

// A distribution whose pairwise-surrogate minimizer misorders a label pair
// relative to sign(Delta_ij^10 - Delta_ij^01).
struct InconsistencyWitness {
  ConditionalLabelDistribution dist;
  ScoreVector h_star;
  int label_i = 0;
  int label_j = 0;
  double delta_diff = 0.0;  // Delta_ij^10 - Delta_ij^01
  double h_diff = 0.0;      // h*_i - h*_j
  long trial = 0;
};

struct InconsistencySearch {
  std::optional<InconsistencyWitness> witness;
  long tried = 0;
  long skipped = 0;  // optimizer non-convergence
};

// Samples random distributions, minimizes the pairwise conditional risk over
// h (gauge h_m = 0), and returns the first sign violation found. A score gap
// below 1e-7 counts as a tie and is a violation only when the Delta gap
// exceeds 1e-4.
InconsistencySearch find_inconsistency_witness(PairwiseSurrogate phi, int m,
                                               long budget, std::uint64_t seed);

// Minimizes the pairwise conditional risk with h_m fixed to 0 and coordinates
// capped at +/-50. Returns the scores, or nullopt on non-convergence.
std::optional<ScoreVector> minimize_pairwise_conditional_risk(
    PairwiseSurrogate phi, const DeltaTable& table);

// Flat Dirichlet over the 2^m outcomes (normalized i.i.d. exponentials).
ConditionalLabelDistribution random_distribution(int m, Rng& rng);

// Random spec for Monte-Carlo sweeps: constant, pairwise-normalized, or a
// full random table.
WeightSpec random_weight_spec(int m, Rng& rng);

// Standard normal scores; occasionally injects exact ties to exercise the
// 1/2 terms.
ScoreVector random_scores(int m, Rng& rng);

}  // namespace mlrank

#endif  // MLRANK_CORE_ORACLE_HPP_
