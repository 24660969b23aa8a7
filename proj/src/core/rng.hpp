#ifndef MLRANK_CORE_RNG_HPP_
#define MLRANK_CORE_RNG_HPP_

#include <cmath>
#include <cstdint>

namespace mlrank {

// Deterministic generator shared by all randomized components. splitmix64
// keeps results identical across platforms, unlike the distributions in
// <random>, whose output is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Unbiased integer in [0, bound) via rejection.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

  // Box-Muller; the second deviate of each pair is cached.
  double normal(double mean = 0.0, double sd = 1.0) {
    if (has_spare_) {
      has_spare_ = false;
      return mean + sd * spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return mean + sd * r * std::cos(theta);
  }

  // Exponential(1).
  double exponential() {
    double u = uniform();
    while (u >= 1.0) u = uniform();
    return -std::log1p(-u);
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Independent substream for unit `index` of a job seeded with `seed`.
// Hashing both inputs through the splitmix64 finalizer decorrelates
// neighbouring indices, so per-unit streams can be consumed in any order
// (or in parallel) without changing the output.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  Rng a(seed);
  const std::uint64_t s = a.next_u64();
  Rng b(s ^ (index * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL));
  return b.next_u64();
}

inline Rng substream(std::uint64_t seed, std::uint64_t index) {
  return Rng(derive_seed(seed, index));
}

}  // namespace mlrank

#endif  // MLRANK_CORE_RNG_HPP_
