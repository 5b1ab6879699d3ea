// Copyright 2026 The gcdc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <span>
#include <vector>

#include "gcdc/assignment.hpp"
#include "gcdc/config.hpp"
#include "gcdc/placement.hpp"
#include "gcdc/straggler.hpp"

namespace gcdc {

// (K-r+1)-th smallest finish time.
double completion_time_gc(std::span<const double> finish_times, int load);

// Max over clusters of the (l-r+1)-th smallest finish time among its members.
double completion_time_clustered(std::span<const double> finish_times,
                                 const std::vector<std::vector<int>>& members, int load);

// (P(l-r+1))-th smallest finish time.
double completion_time_lb(std::span<const double> finish_times, int num_clusters,
                          int cluster_size, int load);

struct IterationRecord {
  int seed = 0;
  int iteration = 0;  // 1-based
  Scheme scheme = Scheme::kGC;
  double completion_time = 0.0;
  int straggler_count = 0;
  std::vector<int> spread;
  bool recovery_flag = false;
  bool fallback_used = false;

  int max_spread() const;
};

// Everything drawn for one iteration of one seed. All schemes are scored
// against the same finish times.
struct IterationContext {
  int iteration = 0;
  WorkerStates states;
  StragglerVector observed;  // what the placement sees (previous or current)
  std::vector<double> finish_times;
  Placement dynamic;  // empty unless GC-DC (or a GC-DC trainer) needs it
};

// Deterministic per-seed iteration source: Markov step, latency draws, then
// greedy placement from the observed straggler vector.
class SeedSimulation {
 public:
  SeedSimulation(const ExperimentConfig& config, int seed_index, bool needs_placement);

  const ClusterAssignment& assignment() const noexcept { return assignment_; }
  const WorkerStates& states() const noexcept { return states_; }
  IterationContext next();

 private:
  const ExperimentConfig& config_;
  bool needs_placement_;
  ClusterAssignment assignment_;
  WorkerStates states_;
  Rng dynamics_;
  int iteration_ = 0;
};

std::vector<IterationRecord> score_iteration(const ExperimentConfig& config,
                                             const StaticClusters& base, int seed_index,
                                             const IterationContext& ctx);

struct ExperimentResult {
  // Seed-major, then iteration, then config.schemes order.
  std::vector<IterationRecord> records;
  std::map<Scheme, double> mean_completion;
  std::map<Scheme, double> recovery_rate;
  int fallback_count = 0;
};

std::vector<IterationRecord> run_seed(const ExperimentConfig& config, int seed_index);

// Seeds fan out over OpenMP threads under kParallel; results are merged in
// seed order, so both modes return identical records.
ExperimentResult run_experiment(const ExperimentConfig& config,
                                Execution exec = Execution::kParallel);

}  // namespace gcdc
