// Deterministic pseudorandom generation for reproducible experiments.
// xoshiro256** seeded through splitmix64; bounded draws use rejection so the
// stream of values is exactly uniform and identical on every platform.
// Per-trial seeds are derived from (master seed, trial index) by mixing, so
// trial i can be replayed in isolation and results never depend on how
// trials are scheduled across threads.
#pragma once

#include <cstdint>

namespace bertini {

// splitmix64 finalizer: a bijective avalanche mix on 64-bit words.
inline uint64_t mix64(uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

// Seed for trial i under a master seed: mix64(master + GOLDEN * (i + 1)),
// GOLDEN = 0x9e3779b97f4a7c15 (2^64 / golden ratio).
inline uint64_t per_trial_seed(uint64_t master, uint64_t trial) {
  return mix64(master + 0x9e3779b97f4a7c15ULL * (trial + 1));
}

class Rng {
 public:
  explicit Rng(uint64_t seed) {
    uint64_t sm = seed;
    for (auto& w : state_) {
      sm += 0x9e3779b97f4a7c15ULL;
      w = mix64(sm);
    }
  }

  uint64_t next() {
    const uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform in [0, n), exact via rejection. n >= 1.
  uint64_t below(uint64_t n) {
    const uint64_t threshold = (0 - n) % n;  // 2^64 mod n
    for (;;) {
      const uint64_t u = next();
      if (u >= threshold) return u % n;
    }
  }

  // Uniform double in [0, 1) with 53 random bits.
  double unit() { return double(next() >> 11) * 0x1.0p-53; }

 private:
  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  uint64_t state_[4];
};

}  // namespace bertini
