#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace coex {

using Rng = std::mt19937_64;

/// Uniform double in [0, 1) from the top 53 bits of one draw.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline bool bernoulli(Rng& rng, double p) { return uniform01(rng) < p; }

/// Number of failures before the first success of a Bernoulli(p) sequence.
inline std::uint64_t geometric(Rng& rng, double p) {
  if (p >= 1.0) return 0;
  const double u = 1.0 - uniform01(rng);
  const double g = std::floor(std::log(u) / std::log1p(-p));
  return g >= 1.8e19 ? UINT64_MAX / 2 : static_cast<std::uint64_t>(g);
}

/// SplitMix64 mix of (seed, stream) for independent per-partition streams.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace coex
