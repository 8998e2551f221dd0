// Platform-stable draws on top of std::mt19937_64. The standard distributions
// are implementation-defined, which would break byte-identical outputs.
#pragma once

#include <cstdint>
#include <random>

namespace dda::detail {

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

/// Uniform in [0, 1).
inline double unit(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline bool bernoulli(Rng& rng, double p) { return unit(rng) < p; }

/// Uniform in [0, n).
inline std::uint64_t index(Rng& rng, std::uint64_t n) {
  return static_cast<std::uint64_t>(unit(rng) * static_cast<double>(n)) % n;
}

}  // namespace dda::detail
