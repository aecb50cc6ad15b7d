#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace relmine {

/// Used whenever a seed is not given; never derived from the clock.
inline constexpr std::uint64_t kDefaultSeed = 20251110;

/// One generator per (seed, stream). `stream` is a stable per-item index, so
/// draws do not depend on which worker handles the item. std::seed_seq and
/// mt19937_64 are fully specified by the standard, so the sequence is the
/// same on every platform.
inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

/// Uniform in [0, n) by rejection. std::uniform_int_distribution is
/// implementation-defined, which would make outputs differ between standard
/// libraries.
inline std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
  const std::uint64_t bound = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return static_cast<std::size_t>(x % bound);
}

inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace relmine
