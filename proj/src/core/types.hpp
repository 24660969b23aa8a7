#ifndef MLRANK_CORE_TYPES_HPP_
#define MLRANK_CORE_TYPES_HPP_

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mlrank {

enum class ErrorCode {
  kInvalidArgument = 1,
  kDimensionMismatch = 2,
  kParse = 3,
  kIo = 4,
  kNumeric = 5,
  kNotConverged = 6,
  kDegenerateWeight = 7,
  kUnknownLabeling = 8,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

// Binary relevance vector y in {0,1}^m for one instance.
struct LabelVector {
  std::vector<std::uint8_t> bits;

  LabelVector() = default;
  explicit LabelVector(std::vector<std::uint8_t> b) : bits(std::move(b)) {}
  LabelVector(std::initializer_list<int> init) {
    bits.reserve(init.size());
    for (int v : init) bits.push_back(static_cast<std::uint8_t>(v));
    validate();
  }

  std::size_t size() const { return bits.size(); }
  std::uint8_t operator[](std::size_t i) const { return bits[i]; }

  // Number of relevant labels s_y.
  int sum() const {
    int s = 0;
    for (std::uint8_t b : bits) s += b;
    return s;
  }

  void validate() const {
    for (std::uint8_t b : bits) {
      if (b != 0 && b != 1)
        fail(ErrorCode::kInvalidArgument, "label vector entries must be 0 or 1");
    }
  }

  bool operator==(const LabelVector& other) const { return bits == other.bits; }
  bool operator<(const LabelVector& other) const { return bits < other.bits; }
};

// Real-valued scores h(x) in R^m; ordering the labels by decreasing score
// induces the predicted ranking.
struct ScoreVector {
  std::vector<double> scores;

  ScoreVector() = default;
  explicit ScoreVector(std::vector<double> s) : scores(std::move(s)) {}
  ScoreVector(std::initializer_list<double> init) : scores(init) {}

  std::size_t size() const { return scores.size(); }
  double operator[](std::size_t i) const { return scores[i]; }
  double& operator[](std::size_t i) { return scores[i]; }

  void validate() const;
};

enum class SignedLabel : int { kNegative = -1, kPositive = +1 };

inline SignedLabel to_signed(std::uint8_t bit) {
  return bit ? SignedLabel::kPositive : SignedLabel::kNegative;
}

inline int sign_value(SignedLabel y) { return static_cast<int>(y); }

inline void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) fail(code, message);
}

}  // namespace mlrank

#endif  // MLRANK_CORE_TYPES_HPP_
