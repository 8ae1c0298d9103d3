#pragma once

#include <cstdint>
#include <random>

// Deterministic random draws. std::mt19937_64 output is fully specified by
// the standard, and the mappings below avoid std::uniform_*_distribution,
// whose results are implementation-defined. Same seed, same stream, any
// platform.

namespace mttkrp::rng {

using engine = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline engine seeded(std::uint64_t seed, std::uint64_t stream = 0) {
  return engine(splitmix64(seed ^ splitmix64(stream)));
}

/// Unbiased draw from [0, n). n must be positive.
inline std::uint64_t bounded(engine& g, std::uint64_t n) {
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    std::uint64_t r = g();
    if (r >= threshold) return r % n;
  }
}

/// Draw from the half-open interval (0, 1].
template <typename T>
inline T unit_open_closed(engine& g) {
  return static_cast<T>(1.0 - static_cast<double>(g() >> 11) * 0x1.0p-53);
}

}  // namespace mttkrp::rng
