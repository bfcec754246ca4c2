#pragma once

// Fixed 64-bit PRNG so that every sampler is reproducible bit-for-bit for a
// given seed: xoshiro256++ seeded through SplitMix64.  Derived streams for
// independent trials use seed ^ trial_index before seeding.

#include <cstdint>
#include <cmath>

namespace solgas {

struct Rng {
  uint64_t s[4];

  explicit Rng(uint64_t seed) {
    // SplitMix64 state expansion
    uint64_t x = seed;
    for (auto& w : s) {
      x += 0x9e3779b97f4a7c15ULL;
      uint64_t z = x;
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
      w = z ^ (z >> 31);
    }
  }

  static Rng for_trial(uint64_t seed, uint64_t trial_index) {
    return Rng(seed ^ trial_index);
  }

  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  uint64_t next() {
    const uint64_t result = rotl(s[0] + s[3], 23) + s[0];
    const uint64_t t = s[1] << 17;
    s[2] ^= s[0];
    s[3] ^= s[1];
    s[1] ^= s[2];
    s[0] ^= s[3];
    s[2] ^= t;
    s[3] = rotl(s[3], 45);
    return result;
  }

  // uniform on (0,1), never exactly 0 or 1
  double u01() { return (double(next() >> 11) + 0.5) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * u01(); }

  // standard normal, Box-Muller (two uniforms per deviate)
  double normal() {
    const double u1 = u01(), u2 = u01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }
};

}  // namespace solgas
