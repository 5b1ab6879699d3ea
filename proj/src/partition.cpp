// Copyright 2026 The gcdc Authors
// SPDX-License-Identifier: Apache-2.0

#include "gcdc/partition.hpp"

#include <string>

#include "gcdc/errors.hpp"

namespace gcdc {

Partition partition_dataset(std::size_t num_samples, std::size_t num_batches) {
  if (num_batches < 1 || num_samples < num_batches) {
    throw ConfigError("partition_dataset: need num_samples >= K >= 1 (got " +
                      std::to_string(num_samples) + " samples, K=" +
                      std::to_string(num_batches) + ")");
  }
  const std::size_t base = num_samples / num_batches;
  const std::size_t extra = num_samples % num_batches;

  Partition out;
  out.num_samples = num_samples;
  out.batches.reserve(num_batches);
  std::size_t cursor = 0;
  for (std::size_t k = 0; k < num_batches; ++k) {
    const std::size_t len = base + (k < extra ? 1 : 0);
    out.batches.push_back({cursor, cursor + len});
    cursor += len;
  }
  return out;
}

}  // namespace gcdc
