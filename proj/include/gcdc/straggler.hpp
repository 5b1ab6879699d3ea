// Copyright 2026 The gcdc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "gcdc/placement.hpp"
#include "gcdc/rng.hpp"

namespace gcdc {

enum class SpeedState : unsigned char { kSlow = 0, kFast = 1 };

using WorkerStates = std::vector<SpeedState>;

// Shifted-exponential computation latency with a two-state Markov chain.
struct LatencyParams {
  double mu_slow = 0.1;
  double mu_fast = 10.0;
  double alpha = 0.01;       // minimum time per computation
  double switch_prob = 0.05;  // per-iteration flip probability

  void validate() const;
};

// Each worker flips state independently with probability p.
WorkerStates step_states(const WorkerStates& states, double switch_prob, Rng& rng);

// s * (alpha + E / mu) for a unit-exponential draw E.
double completion_time_from_draw(SpeedState state, int computations, const LatencyParams& params,
                                 double unit_exponential);

double sample_completion_time(SpeedState state, int computations, const LatencyParams& params,
                              Rng& rng);

// CDF of the time to finish `computations` computations at rate mu.
double completion_time_cdf(double t, int computations, double mu, double alpha);

StragglerVector to_straggler_vector(const WorkerStates& states);

// `count` slow workers chosen uniformly without replacement.
WorkerStates initial_states(int num_workers, int slow_count, Rng& rng);
WorkerStates initial_states_from_ids(int num_workers, const std::vector<int>& slow_ids);

}  // namespace gcdc
