// Copyright 2026 The gcdc Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "gcdc/errors.hpp"
#include "gcdc/simulator.hpp"
#include "oracles.hpp"

namespace {

gcdc::ExperimentConfig small_config() {
  gcdc::ExperimentConfig cfg;
  cfg.iterations = 50;
  cfg.num_seeds = 4;
  return cfg;
}

std::vector<double> random_times(int k, std::mt19937_64& rng) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> t(k);
  for (auto& x : t) x = e(rng);
  return t;
}

}  // namespace

TEST_CASE("plain GC order statistic") {
  CHECK(gcdc::completion_time_gc(std::vector<double>(12, 2.5), 2) == 2.5);
  std::vector<double> ramp(12);
  std::iota(ramp.begin(), ramp.end(), 1.0);
  std::shuffle(ramp.begin(), ramp.end(), std::mt19937(3));
  CHECK(gcdc::completion_time_gc(ramp, 2) == 11.0);
  CHECK(gcdc::completion_time_gc(ramp, 1) == 12.0);
}

TEST_CASE("clustered completion time") {
  const std::vector<double> t{1, 2, 3, 4};
  CHECK(gcdc::completion_time_clustered(t, {{0, 1}, {2, 3}}, 2) == 3.0);
  CHECK(gcdc::completion_time_clustered(std::vector<double>(4, 7.0), {{0, 1}, {2, 3}}, 2) == 7.0);

  // Cluster {0,1,2} is all slow; l-r+1 = 2 so it finishes at its 2nd value.
  const std::vector<double> mixed{30, 10, 20, 0.1, 0.2, 0.3};
  CHECK(gcdc::completion_time_clustered(mixed, {{0, 1, 2}, {3, 4, 5}}, 2) == 20.0);
}

TEST_CASE("lower bound") {
  const std::vector<double> t{1, 2, 3, 4};
  CHECK(gcdc::completion_time_lb(t, 2, 2, 2) == 2.0);
  CHECK(gcdc::completion_time_lb(std::vector<double>(6, 1.5), 2, 3, 2) == 1.5);
}

TEST_CASE("order statistics agree with sorting and LB dominates") {
  std::mt19937_64 rng(8);
  const auto base = gcdc::build_static_clusters(12, 4);
  for (int trial = 0; trial < 10000; ++trial) {
    const auto t = random_times(12, rng);
    const auto a = gcdc::build_cluster_assignment(base, 2, rng());
    gcdc::StragglerVector s(12);
    for (auto& v : s) v = rng() & 1;
    const auto members = gcdc::greedy_place(a, s).cluster_members;

    double clustered = 0.0;
    for (const auto& m : members) {
      std::vector<double> local;
      for (int w : m) local.push_back(t[w]);
      clustered = std::max(clustered, oracle::kth_smallest(local, 2));
    }
    REQUIRE(gcdc::completion_time_clustered(t, members, 2) == clustered);
    REQUIRE(gcdc::completion_time_gc(t, 2) == oracle::kth_smallest(t, 11));
    const double lb = gcdc::completion_time_lb(t, 4, 3, 2);
    REQUIRE(lb == oracle::kth_smallest(t, 8));
    REQUIRE(lb <= clustered);
    REQUIRE(lb <= gcdc::completion_time_gc(t, 2));
  }
}

TEST_CASE("one cluster degenerates to plain GC") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto t = random_times(8, rng);
    std::vector<int> all(8);
    std::iota(all.begin(), all.end(), 0);
    CHECK(gcdc::completion_time_clustered(t, {all}, 3) == gcdc::completion_time_gc(t, 3));
  }
}

TEST_CASE("record invariants and per-iteration dominance") {
  const auto cfg = small_config();
  const auto result = gcdc::run_experiment(cfg);
  REQUIRE(result.records.size() == 4u * 50 * 4);
  for (std::size_t i = 0; i < result.records.size(); i += 4) {
    const auto* it = &result.records[i];
    // config order: LB, GC-DC, GC-SC, GC
    REQUIRE(it[0].scheme == gcdc::Scheme::kLB);
    for (int j = 0; j < 4; ++j) {
      CHECK(it[j].completion_time >= cfg.load * cfg.latency.alpha);
      CHECK(std::accumulate(it[j].spread.begin(), it[j].spread.end(), 0) == it[j].straggler_count);
      CHECK(it[0].completion_time <= it[j].completion_time);
      CHECK(it[j].seed == it[0].seed);
      CHECK(it[j].iteration == it[0].iteration);
    }
  }
  CHECK(result.recovery_rate.at(gcdc::Scheme::kGCDC) >= result.recovery_rate.at(gcdc::Scheme::kGCSC));
}

TEST_CASE("serial and parallel runs are identical") {
  const auto cfg = small_config();
  const auto a = gcdc::run_experiment(cfg, gcdc::Execution::kSerial);
  const auto b = gcdc::run_experiment(cfg, gcdc::Execution::kParallel);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].completion_time == b.records[i].completion_time);
    CHECK(a.records[i].spread == b.records[i].spread);
  }
  CHECK(a.mean_completion == b.mean_completion);
}

TEST_CASE("single iteration single seed is deterministic") {
  auto cfg = small_config();
  cfg.iterations = 1;
  cfg.num_seeds = 1;
  const auto a = gcdc::run_experiment(cfg);
  const auto b = gcdc::run_experiment(cfg);
  REQUIRE(a.records.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) CHECK(a.records[i].completion_time == b.records[i].completion_time);
}

TEST_CASE("scheme set does not change the shared draws") {
  auto cfg = small_config();
  const auto all = gcdc::run_experiment(cfg);
  cfg.schemes = {gcdc::Scheme::kGCSC};
  const auto only = gcdc::run_experiment(cfg);
  std::vector<double> from_all;
  for (const auto& r : all.records) {
    if (r.scheme == gcdc::Scheme::kGCSC) from_all.push_back(r.completion_time);
  }
  REQUIRE(from_all.size() == only.records.size());
  for (std::size_t i = 0; i < from_all.size(); ++i) CHECK(from_all[i] == only.records[i].completion_time);
}

TEST_CASE("observation modes") {
  auto cfg = small_config();
  SUBCASE("previous") {
    gcdc::SeedSimulation sim(cfg, 0, true);
    auto before = gcdc::to_straggler_vector(sim.states());
    for (int t = 0; t < 20; ++t) {
      const auto ctx = sim.next();
      CHECK(ctx.observed == before);
      before = gcdc::to_straggler_vector(ctx.states);
    }
  }
  SUBCASE("perfect") {
    cfg.ssi_mode = gcdc::SsiMode::kPerfect;
    gcdc::SeedSimulation sim(cfg, 0, true);
    for (int t = 0; t < 20; ++t) {
      const auto ctx = sim.next();
      CHECK(ctx.observed == gcdc::to_straggler_vector(ctx.states));
    }
  }
}

TEST_CASE("explicit initial slow ids") {
  auto cfg = small_config();
  cfg.initial_slow_ids = {0, 1, 2};
  gcdc::SeedSimulation sim(cfg, 3, false);
  CHECK(gcdc::to_straggler_vector(sim.states()) == gcdc::StragglerVector{0, 0, 0, 1, 1, 1, 1, 1, 1, 1, 1, 1});
}

TEST_CASE("homogeneous speeds make static and dynamic clustering indistinguishable") {
  auto cfg = small_config();
  cfg.latency.mu_slow = 1.0;
  cfg.latency.mu_fast = std::nextafter(1.0, 2.0);
  cfg.iterations = 400;
  cfg.num_seeds = 20;
  cfg.schemes = {gcdc::Scheme::kGCDC, gcdc::Scheme::kGCSC};
  const auto result = gcdc::run_experiment(cfg);
  std::vector<double> diff;
  for (std::size_t i = 0; i < result.records.size(); i += 2) {
    diff.push_back(result.records[i].completion_time - result.records[i + 1].completion_time);
  }
  double mean = 0.0, var = 0.0;
  for (double d : diff) mean += d / diff.size();
  for (double d : diff) var += (d - mean) * (d - mean) / (diff.size() - 1);
  const double se = std::sqrt(var / diff.size());
  MESSAGE("paired mean difference " << mean << " (se " << se << ")");
  CHECK(std::abs(mean) <= 2 * se);
}

TEST_CASE("invalid configuration is rejected before sampling") {
  auto cfg = small_config();
  cfg.num_clusters = 5;
  CHECK_THROWS_AS(gcdc::run_experiment(cfg), gcdc::ConfigError);
  cfg = small_config();
  cfg.load = 4;
  CHECK_THROWS_AS(gcdc::run_experiment(cfg), gcdc::ConfigError);
  cfg = small_config();
  cfg.num_blocks = 5;
  CHECK_THROWS_AS(gcdc::run_experiment(cfg), gcdc::ConfigError);
}
