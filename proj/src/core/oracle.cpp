#include "core/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "core/optimize.hpp"

namespace mlrank {

namespace {

constexpr int kMaxOracleLabels = 20;
constexpr double kProbSumTolerance = 1e-12;
constexpr double kScoreTieTolerance = 1e-7;
constexpr double kDeltaGapThreshold = 1e-4;
constexpr double kCoordinateCap = 50.0;

int sign_of(double x) { return x > 0.0 ? 1 : (x < 0.0 ? -1 : 0); }

void check_dimension(const DeltaTable& table, const ScoreVector& h) {
  require(static_cast<std::size_t>(table.m()) == h.size(),
          ErrorCode::kDimensionMismatch, "score length does not match table");
}

}  // namespace

ConditionalLabelDistribution ConditionalLabelDistribution::create(
    int m, std::vector<double> probs) {
  ConditionalLabelDistribution dist;
  dist.m = m;
  dist.probs = std::move(probs);
  dist.validate();
  return dist;
}

LabelVector ConditionalLabelDistribution::outcome(std::size_t index) const {
  std::vector<std::uint8_t> bits(m);
  for (int i = 0; i < m; ++i) bits[i] = (index >> i) & 1u;
  return LabelVector(std::move(bits));
}

void ConditionalLabelDistribution::validate() const {
  require(m >= 2, ErrorCode::kInvalidArgument, "need at least 2 labels");
  require(m <= kMaxOracleLabels, ErrorCode::kInvalidArgument,
          "oracle caps m at 20 (dense enumeration)");
  require(probs.size() == (std::size_t{1} << m), ErrorCode::kInvalidArgument,
          "probability table must have 2^m entries");
  double sum = 0.0;
  for (double p : probs) {
    require(p >= 0.0, ErrorCode::kInvalidArgument, "negative probability");
    sum += p;
  }
  require(std::abs(sum - 1.0) <= kProbSumTolerance, ErrorCode::kInvalidArgument,
          "probabilities must sum to 1");
}

DeltaTable compute_deltas(const ConditionalLabelDistribution& dist,
                          const WeightSpec& spec) {
  dist.validate();
  const int m = dist.m;
  DeltaTable table(m, spec.w_max(m));
  std::vector<std::uint8_t> bits(m);
  for (std::size_t k = 0; k < dist.outcomes(); ++k) {
    for (int i = 0; i < m; ++i) bits[i] = (k >> i) & 1u;
    LabelVector y(bits);
    const double mass = spec.weight(y) * dist.probs[k];
    table.w_total_ += mass;
    if (mass == 0.0) continue;
    for (int i = 0; i < m; ++i) {
      const int u = bits[i];
      (u ? table.single1_[i] : table.single0_[i]) += mass;
      for (int j = 0; j < m; ++j) {
        if (j == i) continue;
        table.pair_ref(i, j, u, bits[j]) += mass;
      }
    }
  }
  return table;
}

double conditional_rank_risk(const DeltaTable& table, const ScoreVector& h) {
  check_dimension(table, h);
  const int m = table.m();
  double risk = 0.0;
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      const double d10 = table.pair(i, j, 1, 0);
      const double d01 = table.pair(i, j, 0, 1);
      if (h[i] < h[j])
        risk += d10;
      else if (h[i] > h[j])
        risk += d01;
      else
        risk += 0.5 * (d10 + d01);
    }
  }
  return risk;
}

double bayes_rank_risk(const DeltaTable& table) {
  const int m = table.m();
  double risk = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      risk += std::min(table.pair(i, j, 1, 0), table.pair(i, j, 0, 1));
  return risk;
}

ScoreVector bayes_ranker(const DeltaTable& table) {
  return ScoreVector(table.marginals());
}

double regret_conditional(const DeltaTable& table, const ScoreVector& h) {
  check_dimension(table, h);
  const int m = table.m();
  double regret = 0.0;
  for (int j = 0; j < m; ++j) {
    for (int i = j + 1; i < m; ++i) {
      const double di = table.single(i, 1);
      const double dj = table.single(j, 1);
      double paid;
      if (h[i] < h[j])
        paid = di;
      else if (h[i] > h[j])
        paid = dj;
      else
        paid = 0.5 * (di + dj);
      regret += paid - std::min(di, dj);
    }
  }
  return regret;
}

double binary_surrogate_regret_term(UnivariateKind kind, double d1, double d0,
                                    double h) {
  double value, best;
  if (kind == UnivariateKind::kExp) {
    value = d1 * exp_loss(h) + d0 * exp_loss(-h);
    best = 2.0 * std::sqrt(d1 * d0);
  } else {
    value = d1 * log1p_exp_neg(h) + d0 * log1p_exp_neg(-h);
    const double w = d1 + d0;
    best = 0.0;
    if (d1 > 0.0) best -= d1 * std::log(d1 / w);
    if (d0 > 0.0) best -= d0 * std::log(d0 / w);
  }
  return std::max(0.0, value - best);
}

double univariate_surrogate_regret(UnivariateKind kind, const DeltaTable& table,
                                   const ScoreVector& h) {
  check_dimension(table, h);
  double regret = 0.0;
  for (int i = 0; i < table.m(); ++i)
    regret +=
        binary_surrogate_regret_term(kind, table.single(i, 1), table.single(i, 0), h[i]);
  return regret;
}

ScoreVector univariate_pointwise_minimizer(UnivariateKind kind,
                                           const DeltaTable& table,
                                           double cap) {
  const int m = table.m();
  std::vector<double> h(m, 0.0);
  const double scale = kind == UnivariateKind::kExp ? 0.5 : 1.0;
  for (int i = 0; i < m; ++i) {
    const double d1 = table.single(i, 1);
    const double d0 = table.single(i, 0);
    if (d1 <= 0.0 && d0 <= 0.0)
      h[i] = 0.0;
    else if (d0 <= 0.0)
      h[i] = cap;
    else if (d1 <= 0.0)
      h[i] = -cap;
    else
      h[i] = std::clamp(scale * std::log(d1 / d0), -cap, cap);
  }
  return ScoreVector(std::move(h));
}

BipartiteReduction reduce_to_bipartite(const DeltaTable& table) {
  require(table.w_total() > 0.0, ErrorCode::kDegenerateWeight,
          "degenerate weight: W = 0");
  BipartiteReduction reduction;
  reduction.m = table.m();
  reduction.eta.resize(reduction.m);
  for (int i = 0; i < reduction.m; ++i)
    reduction.eta[i] =
        std::clamp(table.single(i, 1) / table.w_total(), 0.0, 1.0);
  return reduction;
}

double bipartite_regret(const BipartiteReduction& reduction,
                        const ScoreVector& h) {
  require(static_cast<std::size_t>(reduction.m) == h.size(),
          ErrorCode::kDimensionMismatch, "score length does not match reduction");
  const int m = reduction.m;
  double total = 0.0;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      if (i == j) continue;  // h_i = h_i: the tie term cancels the min exactly
      const double cost_ij = reduction.eta[i] * (1.0 - reduction.eta[j]);
      const double cost_ji = reduction.eta[j] * (1.0 - reduction.eta[i]);
      double paid;
      if (h[i] < h[j])
        paid = cost_ij;
      else if (h[i] > h[j])
        paid = cost_ji;
      else
        paid = 0.5 * (cost_ij + cost_ji);
      total += paid - std::min(cost_ij, cost_ji);
    }
  }
  return total / (static_cast<double>(m) * m);
}

RegretBoundReport check_regret_bound(UnivariateKind kind,
                                     const DeltaTable& table,
                                     const ScoreVector& h, double slack) {
  RegretBoundReport report;
  const double m = table.m();
  report.lhs = regret_conditional(table, h);
  report.surrogate_regret = univariate_surrogate_regret(kind, table, h);
  report.constant_c = m * std::sqrt(m * table.w_total());
  report.constant_c_wmax = m * std::sqrt(m * table.w_max());
  const double factor = kind == UnivariateKind::kExp
                            ? std::sqrt(6.0) / 4.0
                            : std::sqrt(2.0) / 2.0;
  report.rhs = factor * report.constant_c * std::sqrt(report.surrogate_regret);
  report.holds = report.lhs <= report.rhs + slack;
  return report;
}

double pairwise_conditional_risk(PairwiseSurrogate phi, const DeltaTable& table,
                                 const ScoreVector& h) {
  check_dimension(table, h);
  const int m = table.m();
  double risk = 0.0;
  for (int j = 0; j < m; ++j) {
    for (int i = j + 1; i < m; ++i) {
      const double d = h[i] - h[j];
      risk += table.pair(i, j, 1, 0) * pairwise_phi(phi, d) +
              table.pair(i, j, 0, 1) * pairwise_phi(phi, -d);
    }
  }
  return risk;
}

std::vector<double> pairwise_conditional_risk_gradient(PairwiseSurrogate phi,
                                                       const DeltaTable& table,
                                                       const ScoreVector& h) {
  check_dimension(table, h);
  const int m = table.m();
  std::vector<double> grad(m, 0.0);
  for (int j = 0; j < m; ++j) {
    for (int i = j + 1; i < m; ++i) {
      const double d = h[i] - h[j];
      const double g = table.pair(i, j, 1, 0) * pairwise_phi_derivative(phi, d) -
                       table.pair(i, j, 0, 1) * pairwise_phi_derivative(phi, -d);
      grad[i] += g;
      grad[j] -= g;
    }
  }
  return grad;
}

std::optional<ScoreVector> minimize_pairwise_conditional_risk(
    PairwiseSurrogate phi, const DeltaTable& table) {
  const int m = table.m();
  // Gauge: h_m = 0; optimize the first m-1 coordinates.
  Objective objective = [&](std::span<const double> x,
                            std::span<double> grad) -> double {
    std::vector<double> h(m, 0.0);
    for (int i = 0; i + 1 < m; ++i) h[i] = x[i];
    ScoreVector scores(std::move(h));
    const double value = pairwise_conditional_risk(phi, table, scores);
    const std::vector<double> g = pairwise_conditional_risk_gradient(phi, table, scores);
    for (int i = 0; i + 1 < m; ++i) grad[i] = g[i];
    return value;
  };
  MinimizeOptions options;
  options.gradient_tolerance = 1e-10;
  options.max_iterations = 100000;
  MinimizeResult result = minimize(objective, std::vector<double>(m - 1, 0.0), options);
  const bool capped =
      std::any_of(result.x.begin(), result.x.end(),
                  [](double v) { return std::abs(v) > kCoordinateCap; });
  if (!result.converged && !capped) return std::nullopt;
  std::vector<double> h(m, 0.0);
  for (int i = 0; i + 1 < m; ++i)
    h[i] = std::clamp(result.x[i], -kCoordinateCap, kCoordinateCap);
  return ScoreVector(std::move(h));
}

InconsistencySearch find_inconsistency_witness(PairwiseSurrogate phi, int m,
                                               long budget, std::uint64_t seed) {
  require(m >= 2, ErrorCode::kInvalidArgument, "need at least 2 labels");
  const WeightSpec unit = WeightSpec::constant(1.0);
  InconsistencySearch search;
  for (long trial = 0; trial < budget; ++trial) {
    Rng rng = substream(seed, static_cast<std::uint64_t>(trial));
    ConditionalLabelDistribution dist = random_distribution(m, rng);
    DeltaTable table = compute_deltas(dist, unit);
    search.tried = trial + 1;
    std::optional<ScoreVector> h = minimize_pairwise_conditional_risk(phi, table);
    if (!h) {
      ++search.skipped;
      continue;
    }
    for (int i = 0; i < m; ++i) {
      for (int j = i + 1; j < m; ++j) {
        const double delta_diff =
            table.pair(i, j, 1, 0) - table.pair(i, j, 0, 1);
        if (std::abs(delta_diff) <= kDeltaGapThreshold) continue;
        const double h_diff = (*h)[i] - (*h)[j];
        const bool tied = std::abs(h_diff) < kScoreTieTolerance;
        if (tied || sign_of(h_diff) != sign_of(delta_diff)) {
          InconsistencyWitness witness;
          witness.dist = std::move(dist);
          witness.h_star = std::move(*h);
          witness.label_i = i;
          witness.label_j = j;
          witness.delta_diff = delta_diff;
          witness.h_diff = h_diff;
          witness.trial = trial;
          search.witness = std::move(witness);
          return search;
        }
      }
    }
  }
  return search;
}

ConditionalLabelDistribution random_distribution(int m, Rng& rng) {
  const std::size_t n = std::size_t{1} << m;
  std::vector<double> probs(n);
  double sum = 0.0;
  for (double& p : probs) {
    p = rng.exponential();
    sum += p;
  }
  for (double& p : probs) p /= sum;
  // Renormalize exactly enough for the 1e-12 validity gate.
  double total = 0.0;
  for (double p : probs) total += p;
  probs[0] += 1.0 - total;
  if (probs[0] < 0.0) probs[0] = 0.0;
  return ConditionalLabelDistribution::create(m, std::move(probs));
}

WeightSpec random_weight_spec(int m, Rng& rng) {
  switch (rng.below(3)) {
    case 0:
      return WeightSpec::constant(rng.uniform(0.05, 2.0));
    case 1:
      return WeightSpec::pairwise_normalized();
    default: {
      std::map<LabelVector, double> entries;
      const std::size_t n = std::size_t{1} << m;
      std::vector<std::uint8_t> bits(m);
      for (std::size_t k = 0; k < n; ++k) {
        for (int i = 0; i < m; ++i) bits[i] = (k >> i) & 1u;
        const double w = rng.uniform() < 0.1 ? 0.0 : rng.uniform(0.0, 2.0);
        entries[LabelVector(bits)] = w;
      }
      return WeightSpec::table(std::move(entries));
    }
  }
}

ScoreVector random_scores(int m, Rng& rng) {
  std::vector<double> h(m);
  for (double& s : h) s = rng.normal();
  const double u = rng.uniform();
  if (u < 0.05) {
    std::fill(h.begin(), h.end(), h[0]);
  } else if (u < 0.3 && m >= 2) {
    const std::size_t i = rng.below(m);
    std::size_t j = rng.below(m);
    while (j == i) j = rng.below(m);
    h[j] = h[i];
  }
  return ScoreVector(std::move(h));
}

}  // namespace mlrank
