#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace tailcausal {

using Engine = std::mt19937_64;

/// Engine seeded through std::seed_seq, so streams are identical across
/// standard library implementations.
Engine make_engine(std::uint64_t seed);

/// Seed for replicate `index` of a run seeded with `base`.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

/// Uniform draw on the open interval (0, 1), built from the top 53 bits.
inline double uniform_open(Engine& g) {
  return (static_cast<double>(g() >> 11) + 0.5) * 0x1.0p-53;
}

/// Uniform index in [0, n).
inline std::size_t uniform_index(Engine& g, std::size_t n) {
  const auto k = static_cast<std::size_t>(uniform_open(g) * static_cast<double>(n));
  return k < n ? k : n - 1;
}

}  // namespace tailcausal
