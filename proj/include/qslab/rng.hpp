#pragma once

#include <cstdint>

namespace qslab {

// Deterministic cross-platform generator. Standard-library distributions are
// implementation-defined, which would break byte-identical reports, so draws
// are hand-rolled on top of splitmix64 streams keyed by (seed, stream, index).
struct Rng {
  uint64_t state;

  explicit Rng(uint64_t seed, uint64_t stream = 0, uint64_t index = 0)
      : state(mix(mix(mix(0x9e3779b97f4a7c15ull ^ seed) + stream) + index)) {}

  static uint64_t mix(uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  uint64_t next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // uniform in [0, n), rejection-sampled, n >= 1
  uint64_t below(uint64_t n) {
    uint64_t threshold = -n % n;  // 2^64 mod n
    for (;;) {
      uint64_t r = next();
      if (r >= threshold) return r % n;
    }
  }
};

}  // namespace qslab
