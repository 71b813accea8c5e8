#pragma once

#include <cmath>
#include <cstdint>

namespace infotrace::rng {

// Counter-based generator: SplitMix64 finalizer applied to
// seed + (counter+1) * golden gamma. Every draw is addressable by
// (seed, counter), so sketches regenerate identically in any order.

inline constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::uint64_t bits(std::uint64_t seed, std::uint64_t counter) {
  return mix64(seed + (counter + 1) * kGamma);
}

// Uniform on [0, 1), 53-bit resolution.
inline double uniform01(std::uint64_t seed, std::uint64_t counter) {
  return static_cast<double>(bits(seed, counter) >> 11) * 0x1.0p-53;
}

// +1 or -1, equiprobable (top bit).
inline double rademacher(std::uint64_t seed, std::uint64_t counter) {
  return (bits(seed, counter) >> 63) ? -1.0 : 1.0;
}

// Standard normal via Box-Muller; draw i consumes counters 2i and 2i+1.
inline double gaussian(std::uint64_t seed, std::uint64_t counter) {
  double u1 = static_cast<double>(bits(seed, 2 * counter) >> 11) * 0x1.0p-53;
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  const double u2 = uniform01(seed, 2 * counter + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

// Derives an independent stream seed; used to keep sub-streams
// (trigger direction, row noise, ...) from overlapping.
inline std::uint64_t substream(std::uint64_t seed, std::uint64_t tag) {
  return mix64(seed ^ mix64(tag));
}

}  // namespace infotrace::rng
