// Copyright 2026 The gcdc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gcdc/assignment.hpp"

namespace gcdc {

// S_k = 1 for a fast worker, 0 for a straggler.
using StragglerVector = std::vector<int>;

struct CodewordRef {
  int cluster = -1;
  int slot = -1;
  friend bool operator==(const CodewordRef&, const CodewordRef&) = default;
};

// One iteration's dynamic cluster formation. cluster_members[p] lists the
// members of cluster p in slot order; worker_codeword[w] is w's codeword.
struct Placement {
  std::vector<std::vector<int>> cluster_members;
  std::vector<CodewordRef> worker_codeword;
  bool fallback_used = false;

  friend bool operator==(const Placement&, const Placement&) = default;
};

// Clusters with remaining capacity, ascending by the number of eligible
// unplaced workers from `group`; ties by cluster index. `placed` may be empty.
std::vector<int> availability_order(const ClusterAssignment& assign, const std::vector<int>& group,
                                    const std::vector<int>& capacity,
                                    const std::vector<bool>& placed = {});

// Static layout as a Placement (members sorted by id take slots in order).
Placement static_placement(const StaticClusters& base);

// Two-phase greedy: turn-based placement of the larger group then the smaller
// one, followed by swap / swap-chain conflict resolution. Falls back to the
// static layout (fallback_used) if conflicts cannot be resolved.
Placement greedy_place(const ClusterAssignment& assign, const StragglerVector& observed);

bool full_recovery_possible(const Placement& placement, const StragglerVector& states, int load);

std::vector<int> straggler_spread(const Placement& placement, const StragglerVector& states);

// Empty when valid; otherwise the first violated invariant.
std::optional<std::string> validate_placement(const ClusterAssignment& assign,
                                              const Placement& placement);

// Minimum over all valid placements of the maximum per-cluster straggler
// count. Enumerates every worker's eligible clusters; intended for K <= 12.
int brute_force_min_max_load(const ClusterAssignment& assign, const StragglerVector& states);

// {"fallback_used":..,"clusters":[{"cluster":1,"members":[{"worker":w,"slot":s}..]}..]}
// with 1-based ids.
std::string placement_json(const Placement& placement);

}  // namespace gcdc
