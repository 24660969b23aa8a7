#ifndef MLRANK_CORE_DATAIO_HPP_
#define MLRANK_CORE_DATAIO_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "core/types.hpp"

namespace mlrank {

// In-memory multilabel dataset: n instances with d dense features and m
// binary labels each. Features and labels are stored flat, row-major.
struct MultilabelDataset {
  int m = 0;
  int d = 0;
  std::vector<double> features;      // n * d
  std::vector<std::uint8_t> labels;  // n * m
  std::vector<std::string> comments; // header comments, stored without '#'

  std::size_t size() const {
    return d > 0 ? features.size() / static_cast<std::size_t>(d) : 0;
  }

  std::span<const double> features_of(std::size_t n) const {
    return {features.data() + n * static_cast<std::size_t>(d),
            static_cast<std::size_t>(d)};
  }

  std::uint8_t label_bit(std::size_t n, int i) const {
    return labels[n * static_cast<std::size_t>(m) + i];
  }

  LabelVector labels_of(std::size_t n) const {
    const std::uint8_t* row = labels.data() + n * static_cast<std::size_t>(m);
    return LabelVector(std::vector<std::uint8_t>(row, row + m));
  }

  void add_instance(std::span<const double> x, const LabelVector& y);
  void validate() const;

  bool operator==(const MultilabelDataset& other) const = default;
};

// Sparse text format, one instance per line:
//   label_idx[,label_idx...] feat_idx:value ...
// 0-based indices, blank label field allowed (line starts with a space),
// missing features are 0. '#' lines are comments; the header must contain
// `#m=<int> #d=<int>` before the first instance.
MultilabelDataset read_sparse(const std::string& path);

void write_sparse(const MultilabelDataset& data, const std::string& path);

// Seeded shuffle then prefix split into (train, holdout); the train side
// receives round(fraction * n) instances.
std::pair<MultilabelDataset, MultilabelDataset> split(
    const MultilabelDataset& data, double fraction, std::uint64_t seed);

}  // namespace mlrank

#endif  // MLRANK_CORE_DATAIO_HPP_
