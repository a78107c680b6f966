#pragma once

// Portable seeded sampling.  std::uniform_int_distribution is
// implementation-defined, so bounded draws are done by rejection here to
// keep outputs identical across standard libraries.

#include <cstdint>
#include <random>

namespace condense {

using Rng = std::mt19937_64;

inline constexpr std::uint64_t kDefaultSeed = 42;

/// Uniform integer in [0, bound).  bound must be positive.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x = rng();
  while (x >= limit) x = rng();
  return x % bound;
}

/// Uniform integer in [lo, hi].
inline std::int64_t uniform_between(Rng& rng, std::int64_t lo, std::int64_t hi) {
  return lo + static_cast<std::int64_t>(uniform_below(rng, static_cast<std::uint64_t>(hi - lo) + 1));
}

}  // namespace condense
