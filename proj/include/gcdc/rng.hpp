// Copyright 2026 The gcdc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>

namespace gcdc {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Counter-based derivation: distinct (index, stream) pairs never share a
// generator state under the same master seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index,
                                 std::uint64_t stream = 0) {
  return splitmix64(splitmix64(master ^ splitmix64(index)) + stream);
}

enum class Stream : std::uint64_t {
  kInitialStates = 1,
  kDynamics = 2,
  kAssignment = 3,
  kCode = 4,
  kData = 5,
};

inline Rng make_rng(std::uint64_t master, std::uint64_t index, Stream stream) {
  return Rng(derive_seed(master, index, static_cast<std::uint64_t>(stream)));
}

}  // namespace gcdc
