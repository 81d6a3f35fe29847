#pragma once

#include <cstdint>
#include <random>

namespace livekv {

/// Seeded random source. Draws are built directly on mt19937_64 output so a
/// given seed produces the same sequence with every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [lo, hi] (inclusive). Requires lo <= hi.
  std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi);

  /// Uniform double in [0, 1).
  double unit();

  /// True with probability p; p <= 0 never, p >= 1 always.
  bool bernoulli(double p);

 private:
  std::mt19937_64 engine_;
};

}  // namespace livekv
