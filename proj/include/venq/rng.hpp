#pragma once

#include <cstdint>

namespace venq {

// SplitMix64: tiny, seedable, identical output on every platform. Used by
// the verify suites and tests so seeded runs are byte-reproducible.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform enough for test-sized bounds.
  std::uint64_t below(std::uint64_t bound) { return next() % bound; }

  long long rangeInt(long long lo, long long hi) {
    return lo + static_cast<long long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

 private:
  std::uint64_t state_;
};

}  // namespace venq
