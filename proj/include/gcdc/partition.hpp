// Copyright 2026 The gcdc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

namespace gcdc {

struct BatchRange {
  std::size_t begin = 0;
  std::size_t end = 0;  // exclusive

  std::size_t size() const noexcept { return end - begin; }
  friend bool operator==(const BatchRange&, const BatchRange&) = default;
};

// K contiguous, disjoint mini-batches covering [0, num_samples). Sizes differ
// by at most one; the larger batches come first.
struct Partition {
  std::size_t num_samples = 0;
  std::vector<BatchRange> batches;

  std::size_t num_batches() const noexcept { return batches.size(); }
};

Partition partition_dataset(std::size_t num_samples, std::size_t num_batches);

}  // namespace gcdc
