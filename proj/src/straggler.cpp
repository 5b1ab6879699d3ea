// Copyright 2026 The gcdc Authors
// SPDX-License-Identifier: Apache-2.0

#include "gcdc/straggler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "gcdc/errors.hpp"

namespace gcdc {

void LatencyParams::validate() const {
  if (!(mu_slow > 0.0)) throw ConfigError("latency: mu_s must be positive");
  if (!(mu_fast > mu_slow)) throw ConfigError("latency: need mu_f > mu_s");
  if (!(alpha >= 0.0)) throw ConfigError("latency: alpha must be non-negative");
  if (!(switch_prob >= 0.0 && switch_prob <= 1.0)) throw ConfigError("latency: p must lie in [0, 1]");
}

WorkerStates step_states(const WorkerStates& states, double switch_prob, Rng& rng) {
  std::bernoulli_distribution flip(switch_prob);
  WorkerStates out = states;
  for (auto& s : out) {
    if (flip(rng)) s = s == SpeedState::kFast ? SpeedState::kSlow : SpeedState::kFast;
  }
  return out;
}

double completion_time_from_draw(SpeedState state, int computations, const LatencyParams& params,
                                 double unit_exponential) {
  const double mu = state == SpeedState::kFast ? params.mu_fast : params.mu_slow;
  return computations * (params.alpha + unit_exponential / mu);
}

double sample_completion_time(SpeedState state, int computations, const LatencyParams& params,
                              Rng& rng) {
  std::exponential_distribution<double> unit(1.0);
  return completion_time_from_draw(state, computations, params, unit(rng));
}

double completion_time_cdf(double t, int computations, double mu, double alpha) {
  if (t < computations * alpha) return 0.0;
  return 1.0 - std::exp(-mu * (t / computations - alpha));
}

StragglerVector to_straggler_vector(const WorkerStates& states) {
  StragglerVector out(states.size());
  std::transform(states.begin(), states.end(), out.begin(),
                 [](SpeedState s) { return s == SpeedState::kFast ? 1 : 0; });
  return out;
}

WorkerStates initial_states(int num_workers, int slow_count, Rng& rng) {
  if (slow_count < 0 || slow_count > num_workers) {
    throw ConfigError("initial slow count must lie in [0, K]");
  }
  std::vector<int> ids(num_workers);
  std::iota(ids.begin(), ids.end(), 0);
  std::vector<int> chosen;
  std::sample(ids.begin(), ids.end(), std::back_inserter(chosen), slow_count, rng);
  return initial_states_from_ids(num_workers, chosen);
}

WorkerStates initial_states_from_ids(int num_workers, const std::vector<int>& slow_ids) {
  WorkerStates out(num_workers, SpeedState::kFast);
  for (int id : slow_ids) {
    if (id < 0 || id >= num_workers) throw ConfigError("initial slow id " + std::to_string(id) + " out of range");
    out[id] = SpeedState::kSlow;
  }
  return out;
}

}  // namespace gcdc
