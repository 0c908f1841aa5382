#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace bitbandit {

// Seeded random stream with platform-independent transforms. The engine is
// std::mt19937_64 (bit-exact by the standard); uniform and normal variates
// are derived here rather than through <random> distributions, whose output
// is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Standard normal via the Marsaglia polar method.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double scale = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * scale;
    has_spare_ = true;
    return u * scale;
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Independent substreams of one run seed. Changing how many draws one stream
// consumes (e.g. the candidate count K) never perturbs another.
enum class Stream : std::uint64_t {
  kNoise = 1,
  kActionSet = 2,
  kThetaStar = 3,
  kExploration = 4,
  kCodebook = 5,
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed-derivation rule: engine seed = splitmix64(splitmix64(seed) ^ tag).
inline Rng derive_stream(std::uint64_t seed, Stream tag) {
  return Rng(splitmix64(splitmix64(seed) ^ static_cast<std::uint64_t>(tag)));
}

}  // namespace bitbandit
