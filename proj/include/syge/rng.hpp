#pragma once
#include <cstdint>

namespace syge {

// splitmix64 (Steele et al.): 64-bit state, one multiply-xorshift chain per draw.
// The stream depends only on the seed, never on platform or libc, which is what
// makes seeded runs byte-reproducible.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // [0, 1) with 53 random bits
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  // unbiased integer in [0, n) via rejection
  uint64_t below(uint64_t n) {
    const uint64_t threshold = (0 - n) % n;  // 2^64 mod n
    uint64_t x = next_u64();
    while (x < threshold) x = next_u64();
    return x % n;
  }

  // independent stream for a worker/replicate; mixing keeps nearby salts uncorrelated
  static Rng derive(uint64_t seed, uint64_t salt) {
    Rng mix(seed ^ (salt + 0x9e3779b97f4a7c15ull) * 0xff51afd7ed558ccdull);
    mix.next_u64();
    return mix;
  }

 private:
  uint64_t state_;
};

}  // namespace syge
