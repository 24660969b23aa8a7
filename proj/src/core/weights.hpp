#ifndef MLRANK_CORE_WEIGHTS_HPP_
#define MLRANK_CORE_WEIGHTS_HPP_

#include <map>
#include <vector>

#include "core/types.hpp"

namespace mlrank {

// Per-instance cost multiplier w(y) on pair errors. Three kinds:
//   Constant(c)         - w(y) = c
//   PairwiseNormalized  - w(y) = 1 / (s_y (m - s_y)), with w = 0 when the
//                         labeling has no mixed pairs (s_y in {0, m}); the
//                         rank-loss sum is empty there, so nothing is lost.
//   Table               - explicit lookup, error on unknown labelings.
class WeightSpec {
 public:
  enum class Kind { kConstant, kPairwiseNormalized, kTable };

  static WeightSpec constant(double c) {
    require(c >= 0.0, ErrorCode::kInvalidArgument, "constant weight must be >= 0");
    WeightSpec spec;
    spec.kind_ = Kind::kConstant;
    spec.constant_ = c;
    return spec;
  }

  static WeightSpec pairwise_normalized() {
    WeightSpec spec;
    spec.kind_ = Kind::kPairwiseNormalized;
    return spec;
  }

  static WeightSpec table(std::map<LabelVector, double> entries) {
    WeightSpec spec;
    spec.kind_ = Kind::kTable;
    double max = 0.0;
    for (const auto& [y, w] : entries) {
      require(w >= 0.0, ErrorCode::kInvalidArgument, "table weight must be >= 0");
      if (w > max) max = w;
    }
    spec.table_ = std::move(entries);
    spec.table_max_ = max;
    return spec;
  }

  Kind kind() const { return kind_; }
  double constant_value() const { return constant_; }
  const std::map<LabelVector, double>& table_entries() const { return table_; }

  bool operator==(const WeightSpec& other) const {
    return kind_ == other.kind_ && constant_ == other.constant_ &&
           table_ == other.table_;
  }

  double weight(const LabelVector& y) const {
    switch (kind_) {
      case Kind::kConstant:
        return constant_;
      case Kind::kPairwiseNormalized: {
        const int m = static_cast<int>(y.size());
        const int s = y.sum();
        if (s == 0 || s == m) return 0.0;
        return 1.0 / (static_cast<double>(s) * static_cast<double>(m - s));
      }
      case Kind::kTable: {
        auto it = table_.find(y);
        if (it == table_.end())
          fail(ErrorCode::kUnknownLabeling, "unknown labeling in weight table");
        return it->second;
      }
    }
    return 0.0;
  }

  // Declared upper bound w_max for a problem with m labels.
  double w_max(int m) const {
    switch (kind_) {
      case Kind::kConstant:
        return constant_;
      case Kind::kPairwiseNormalized:
        return m >= 2 ? 1.0 / static_cast<double>(m - 1) : 0.0;
      case Kind::kTable:
        return table_max_;
    }
    return 0.0;
  }

 private:
  Kind kind_ = Kind::kConstant;
  double constant_ = 1.0;
  std::map<LabelVector, double> table_;
  double table_max_ = 0.0;
};

}  // namespace mlrank

#endif  // MLRANK_CORE_WEIGHTS_HPP_
