#pragma once

#include <cstdint>
#include <random>

namespace abcomm {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Counter-based seed derivation: the seed for (stream, index) depends only on
/// the root and the two counters, never on the order in which they are drawn.
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream,
                          std::uint64_t index) noexcept;

inline Rng make_rng(std::uint64_t root, std::uint64_t stream, std::uint64_t index) {
  return Rng(derive_seed(root, stream, index));
}

}  // namespace abcomm
