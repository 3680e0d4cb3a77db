#pragma once

#include <cassert>
#include <cstdint>
#include <random>

namespace ranging {

/// Deterministic engine shared by every stochastic component. mt19937_64 is
/// fully specified by the standard, so a given seed produces the same stream
/// on every platform.
using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed for replication `index` of a batch rooted at `base`. Pure function,
/// so replications can run in any order (or in parallel) and still see the
/// same streams.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept {
  return splitmix64(base + 0x9E3779B97F4A7C15ULL * (index + 1));
}

/// Uniform draw from {0, ..., n-1}. Rejection sampling keeps it unbiased;
/// std::uniform_int_distribution is not used because its mapping is
/// implementation-defined and would break cross-platform reproducibility.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
  assert(n >= 1);
  const std::uint64_t min = (0 - n) % n;  // 2^64 mod n
  for (;;) {
    const std::uint64_t x = rng();
    if (x >= min) return x % n;
  }
}

/// Uniform double in [0, 1) built from 53 random bits.
inline double canonical(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// True with probability p. p = 1 always fires, p = 0 never does.
inline bool bernoulli(Rng& rng, double p) { return canonical(rng) < p; }

}  // namespace ranging
