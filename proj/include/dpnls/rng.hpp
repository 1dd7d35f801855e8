#pragma once

#include <cstdint>
#include <random>

namespace dpnls {

/// Seeded generator producing the same stream on every platform: draws come
/// straight from mt19937_64 words, not from distribution adapters.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }

  double uniform() {  // [0, 1)
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double log_uniform(double lo, double hi);

private:
  std::mt19937_64 gen_;
};

}  // namespace dpnls
