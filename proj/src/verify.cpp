// Copyright 2026 The gcdc Authors
// SPDX-License-Identifier: Apache-2.0

#include "gcdc/verify.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "detail/combinations.hpp"
#include "gcdc/assignment.hpp"
#include "gcdc/code.hpp"
#include "gcdc/errors.hpp"
#include "gcdc/placement.hpp"
#include "gcdc/rng.hpp"
#include "gcdc/simulator.hpp"
#include "gcdc/straggler.hpp"

namespace gcdc {
namespace {

struct Shape {
  int workers;
  int clusters;
  int load;
  int blocks;
};

constexpr Shape kShapes[] = {{12, 4, 2, 2}, {20, 5, 3, 3}, {12, 3, 2, 3}, {16, 4, 3, 4}, {8, 1, 3, 1}};

CheckResult check_codes(std::uint64_t seed) {
  CheckResult out{"code subset-decodability", true, ""};
  int subsets = 0;
  for (int l = 1; l <= 8 && out.passed; ++l) {
    for (int r = 1; r <= l && out.passed; ++r) {
      const ClusterCode code = build_cluster_code(l, r, derive_seed(seed, l * 16 + r));
      detail::for_each_combination(l, code.threshold(), [&](std::span<const int> subset) {
        ++subsets;
        try {
          solve_decoding(code, subset);
        } catch (const Error& e) {
          out.passed = false;
          out.detail = e.what();
        }
        return out.passed;
      });
    }
  }
  if (out.passed) out.detail = std::to_string(subsets) + " subsets decoded";
  return out;
}

CheckResult check_assignments(std::uint64_t seed, int instances) {
  CheckResult out{"assignment structure", true, ""};
  Rng rng(seed);
  for (int i = 0; i < instances && out.passed; ++i) {
    const Shape& sh = kShapes[i % std::size(kShapes)];
    const ClusterAssignment a =
        build_cluster_assignment(build_static_clusters(sh.workers, sh.clusters), sh.blocks, rng());
    const int l = a.cluster_size();
    for (int c = 0; c < a.num_clusters(); ++c) {
      auto col = eligible_workers(a, c);
      std::sort(col.begin(), col.end());
      if (static_cast<int>(col.size()) != l * sh.blocks || std::adjacent_find(col.begin(), col.end()) != col.end()) {
        out = {out.name, false, "column " + std::to_string(c + 1) + " is not l*n distinct workers"};
      }
    }
    for (int w = 0; w < a.num_workers() && out.passed; ++w) {
      if (static_cast<int>(a.worker_clusters(w).size()) != sh.blocks ||
          static_cast<int>(a.worker_batches(w).size()) != sh.blocks * l) {
        out = {out.name, false, "worker " + std::to_string(w + 1) + " membership or memory mismatch"};
      }
    }
  }
  if (out.passed) out.detail = std::to_string(instances) + " assignments";
  return out;
}

CheckResult check_placements(std::uint64_t seed, int instances) {
  CheckResult out{"placement validity", true, ""};
  Rng rng(seed);
  int fallbacks = 0;
  for (int i = 0; i < instances && out.passed; ++i) {
    const Shape& sh = kShapes[i % std::size(kShapes)];
    const ClusterAssignment a =
        build_cluster_assignment(build_static_clusters(sh.workers, sh.clusters), sh.blocks, rng());
    StragglerVector s(sh.workers);
    std::bernoulli_distribution coin(0.5);
    for (auto& v : s) v = coin(rng);
    const Placement pl = greedy_place(a, s);
    fallbacks += pl.fallback_used;
    if (auto err = validate_placement(a, pl)) out = {out.name, false, *err};
    const int slow = static_cast<int>(std::count(s.begin(), s.end(), 0));
    const auto spread = straggler_spread(pl, s);
    const int floor = (slow + sh.clusters - 1) / sh.clusters;
    if (*std::max_element(spread.begin(), spread.end()) < floor) out = {out.name, false, "spread below pigeonhole floor"};
  }
  if (out.passed) {
    out.detail = std::to_string(instances) + " placements, " + std::to_string(fallbacks) + " fallbacks";
  }
  return out;
}

CheckResult check_order_statistics(std::uint64_t seed, int instances) {
  CheckResult out{"lower-bound dominance", true, ""};
  Rng rng(seed);
  LatencyParams params;
  for (int i = 0; i < instances && out.passed; ++i) {
    const Shape& sh = kShapes[i % std::size(kShapes)];
    const ClusterAssignment a =
        build_cluster_assignment(build_static_clusters(sh.workers, sh.clusters), sh.blocks, rng());
    const WorkerStates states = initial_states(sh.workers, sh.workers / 2, rng);
    std::vector<double> times(sh.workers);
    for (int w = 0; w < sh.workers; ++w) times[w] = sample_completion_time(states[w], sh.load, params, rng);
    const Placement pl = greedy_place(a, to_straggler_vector(states));
    const int l = a.cluster_size();
    const double lb = completion_time_lb(times, sh.clusters, l, sh.load);
    if (lb > completion_time_clustered(times, pl.cluster_members, sh.load) ||
        lb > completion_time_clustered(times, static_placement(a.base()).cluster_members, sh.load) ||
        lb > completion_time_gc(times, sh.load)) {
      out = {out.name, false, "LB exceeded another scheme"};
    }
    for (double t : times) {
      if (t < sh.load * params.alpha) out = {out.name, false, "sample below s*alpha"};
    }
  }
  if (out.passed) out.detail = std::to_string(instances) + " iterations";
  return out;
}

}  // namespace

std::vector<CheckResult> run_property_checks(std::uint64_t seed, int instances) {
  return {check_codes(derive_seed(seed, 1)), check_assignments(derive_seed(seed, 2), instances),
          check_placements(derive_seed(seed, 3), instances),
          check_order_statistics(derive_seed(seed, 4), instances)};
}

}  // namespace gcdc
