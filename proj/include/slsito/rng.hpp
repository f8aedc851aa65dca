#pragma once

// Counter-based random numbers for reproducible path ensembles.
//
// Algorithm (version 1):
//   * per-path key  = splitmix64 applied to (master seed, stream, index),
//                     see derive_key();
//   * block j       = Philox4x32-10(counter = {j_lo, j_hi, 0, 0}, key);
//   * normal pair   = Box-Muller on two 53-bit uniforms built from the block.
// Changing any of these steps must bump kRngAlgorithmVersion.

#include <array>
#include <cstdint>
#include <utility>

namespace slsito::rng {

inline constexpr int kRngAlgorithmVersion = 1;

/// One SplitMix64 output step applied to `x` (stateless mixing function).
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Derive an independent 64-bit key for (stream, index) from a master seed.
std::uint64_t derive_key(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) noexcept;

using Block = std::array<std::uint32_t, 4>;

/// Philox4x32 with 10 rounds (Salmon et al., "Parallel random numbers: as easy as 1, 2, 3").
Block philox4x32_10(Block counter, std::array<std::uint32_t, 2> key) noexcept;

/// Stateless generator: any (key, position) maps to a fixed pair of draws.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) noexcept;

  Block block(std::uint64_t position) const noexcept;

  /// Two independent U(0,1) values in the open interval.
  std::pair<double, double> uniform_pair(std::uint64_t position) const noexcept;

  /// Two independent standard normals (Box-Muller).
  std::pair<double, double> normal_pair(std::uint64_t position) const noexcept;

 private:
  std::array<std::uint32_t, 2> key_;
};

}  // namespace slsito::rng
