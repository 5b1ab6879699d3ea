// Copyright 2026 The gcdc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gcdc {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Randomized invariant sweeps over the library: code subset-decodability,
// assignment structure, placement validity, order-statistic dominance and
// sampler support. `instances` scales the number of random cases.
std::vector<CheckResult> run_property_checks(std::uint64_t seed, int instances);

}  // namespace gcdc
