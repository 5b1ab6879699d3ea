// Copyright 2026 The gcdc Authors
// SPDX-License-Identifier: Apache-2.0

#include "gcdc/simulator.hpp"

#include <algorithm>
#include <exception>
#include <numeric>

#include <omp.h>

#include "gcdc/errors.hpp"

namespace gcdc {
namespace {

double kth_smallest(std::span<const double> values, int k) {
  if (k < 1 || k > static_cast<int>(values.size())) {
    throw ConfigError("order statistic " + std::to_string(k) + " out of range for " +
                      std::to_string(values.size()) + " values");
  }
  std::vector<double> tmp(values.begin(), values.end());
  std::nth_element(tmp.begin(), tmp.begin() + (k - 1), tmp.end());
  return tmp[k - 1];
}

ClusterAssignment assignment_for_seed(const ExperimentConfig& config, int seed_index) {
  const StaticClusters base = build_static_clusters(config.num_workers, config.num_clusters);
  Rng rng = make_rng(config.master_seed, seed_index, Stream::kAssignment);
  return build_cluster_assignment(base, config.num_blocks, rng());
}

WorkerStates initial_for_seed(const ExperimentConfig& config, int seed_index) {
  if (!config.initial_slow_ids.empty()) {
    return initial_states_from_ids(config.num_workers, config.initial_slow_ids);
  }
  Rng rng = make_rng(config.master_seed, seed_index, Stream::kInitialStates);
  return initial_states(config.num_workers, config.initial_slow_count, rng);
}

int fast_count(const StragglerVector& s) { return std::accumulate(s.begin(), s.end(), 0); }

}  // namespace

double completion_time_gc(std::span<const double> finish_times, int load) {
  return kth_smallest(finish_times, static_cast<int>(finish_times.size()) - load + 1);
}

double completion_time_clustered(std::span<const double> finish_times,
                                 const std::vector<std::vector<int>>& members, int load) {
  double worst = 0.0;
  std::vector<double> local;
  for (const auto& cluster : members) {
    local.clear();
    for (int w : cluster) local.push_back(finish_times[w]);
    worst = std::max(worst, kth_smallest(local, static_cast<int>(cluster.size()) - load + 1));
  }
  return worst;
}

double completion_time_lb(std::span<const double> finish_times, int num_clusters,
                          int cluster_size, int load) {
  return kth_smallest(finish_times, num_clusters * (cluster_size - load + 1));
}

int IterationRecord::max_spread() const {
  return spread.empty() ? 0 : *std::max_element(spread.begin(), spread.end());
}

SeedSimulation::SeedSimulation(const ExperimentConfig& config, int seed_index, bool needs_placement)
    : config_(config),
      needs_placement_(needs_placement),
      assignment_(assignment_for_seed(config, seed_index)),
      states_(initial_for_seed(config, seed_index)),
      dynamics_(make_rng(config.master_seed, seed_index, Stream::kDynamics)) {}

IterationContext SeedSimulation::next() {
  IterationContext ctx;
  ctx.iteration = ++iteration_;
  const StragglerVector previous = to_straggler_vector(states_);
  states_ = step_states(states_, config_.latency.switch_prob, dynamics_);
  ctx.states = states_;
  ctx.finish_times.resize(states_.size());
  for (std::size_t w = 0; w < states_.size(); ++w) {
    ctx.finish_times[w] = sample_completion_time(states_[w], config_.load, config_.latency, dynamics_);
  }
  ctx.observed = config_.ssi_mode == SsiMode::kPerfect ? to_straggler_vector(states_) : previous;
  if (needs_placement_) ctx.dynamic = greedy_place(assignment_, ctx.observed);
  return ctx;
}

std::vector<IterationRecord> score_iteration(const ExperimentConfig& config,
                                             const StaticClusters& base, int seed_index,
                                             const IterationContext& ctx) {
  const StragglerVector actual = to_straggler_vector(ctx.states);
  const int stragglers = config.num_workers - fast_count(actual);
  const int l = config.cluster_size();
  const int r = config.load;

  std::vector<IterationRecord> out;
  out.reserve(config.schemes.size());
  for (Scheme scheme : config.schemes) {
    IterationRecord rec;
    rec.seed = seed_index;
    rec.iteration = ctx.iteration;
    rec.scheme = scheme;
    rec.straggler_count = stragglers;
    switch (scheme) {
      case Scheme::kGC:
        rec.completion_time = completion_time_gc(ctx.finish_times, r);
        rec.spread = {stragglers};
        rec.recovery_flag = config.num_workers - stragglers >= config.num_workers - r + 1;
        break;
      case Scheme::kLB:
        rec.completion_time = completion_time_lb(ctx.finish_times, config.num_clusters, l, r);
        rec.spread = {stragglers};
        rec.recovery_flag = config.num_workers - stragglers >= config.num_clusters * (l - r + 1);
        break;
      case Scheme::kGCSC: {
        const Placement placement = static_placement(base);
        rec.completion_time = completion_time_clustered(ctx.finish_times, placement.cluster_members, r);
        rec.spread = straggler_spread(placement, actual);
        rec.recovery_flag = full_recovery_possible(placement, actual, r);
        break;
      }
      case Scheme::kGCDC:
        rec.completion_time = completion_time_clustered(ctx.finish_times, ctx.dynamic.cluster_members, r);
        rec.spread = straggler_spread(ctx.dynamic, actual);
        rec.recovery_flag = full_recovery_possible(ctx.dynamic, actual, r);
        rec.fallback_used = ctx.dynamic.fallback_used;
        break;
    }
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<IterationRecord> run_seed(const ExperimentConfig& config, int seed_index) {
  const StaticClusters base = build_static_clusters(config.num_workers, config.num_clusters);
  SeedSimulation sim(config, seed_index, config.has_scheme(Scheme::kGCDC));
  std::vector<IterationRecord> records;
  records.reserve(static_cast<std::size_t>(config.iterations) * config.schemes.size());
  for (int t = 0; t < config.iterations; ++t) {
    auto scored = score_iteration(config, base, seed_index, sim.next());
    std::move(scored.begin(), scored.end(), std::back_inserter(records));
  }
  return records;
}

ExperimentResult run_experiment(const ExperimentConfig& config, Execution exec) {
  config.validate();
  const int seeds = config.num_seeds;
  std::vector<std::vector<IterationRecord>> per_seed(seeds);

  if (exec == Execution::kSerial) {
    for (int s = 0; s < seeds; ++s) per_seed[s] = run_seed(config, s);
  } else {
    std::vector<std::exception_ptr> errors(seeds);
#pragma omp parallel for schedule(dynamic, 1)
    for (int s = 0; s < seeds; ++s) {
      try {
        per_seed[s] = run_seed(config, s);
      } catch (...) {
        errors[s] = std::current_exception();
      }
    }
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  ExperimentResult result;
  std::map<Scheme, double> sum;
  std::map<Scheme, int> recovered;
  std::map<Scheme, std::size_t> count;
  for (auto& seed_records : per_seed) {
    for (auto& rec : seed_records) {
      sum[rec.scheme] += rec.completion_time;
      recovered[rec.scheme] += rec.recovery_flag;
      ++count[rec.scheme];
      result.fallback_count += rec.fallback_used;
      result.records.push_back(std::move(rec));
    }
  }
  for (const auto& [scheme, n] : count) {
    result.mean_completion[scheme] = sum[scheme] / static_cast<double>(n);
    result.recovery_rate[scheme] = recovered[scheme] / static_cast<double>(n);
  }
  return result;
}

}  // namespace gcdc
