// Copyright 2026 The gcdc Authors
// SPDX-License-Identifier: Apache-2.0
//
// Serial vs OpenMP timings for the two data-parallel kernels: the per-seed
// experiment fan-out and the per-batch gradient pass.

#include <chrono>
#include <cstdio>

#include <omp.h>

#include "gcdc/config.hpp"
#include "gcdc/partition.hpp"
#include "gcdc/simulator.hpp"
#include "gcdc/trainer.hpp"

namespace {

template <typename Fn>
double time_ms(Fn&& fn, int reps) {
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < reps; ++i) fn();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

}  // namespace

int main() {
  std::printf("threads: %d\n", omp_get_max_threads());

  gcdc::ExperimentConfig cfg;
  cfg.num_workers = 20;
  cfg.num_clusters = 5;
  cfg.load = 3;
  cfg.num_blocks = 3;
  cfg.initial_slow_count = 10;
  cfg.num_seeds = 8;
  cfg.iterations = 400;

  double checksum = 0.0;
  const double sim_serial = time_ms([&] { checksum += gcdc::run_experiment(cfg, gcdc::Execution::kSerial).records.size(); }, 3);
  const double sim_parallel = time_ms([&] { checksum += gcdc::run_experiment(cfg, gcdc::Execution::kParallel).records.size(); }, 3);
  std::printf("run_experiment   serial %9.2f ms  parallel %9.2f ms  speedup %.2fx\n", sim_serial, sim_parallel,
              sim_serial / sim_parallel);

  const auto data = gcdc::generate_synthetic(2000, 400, 1000, 7);
  const auto partition = gcdc::partition_dataset(2000, 12);
  const Eigen::VectorXd theta = Eigen::VectorXd::Constant(1000, 0.01);
  const double grad_serial = time_ms([&] { checksum += gcdc::batch_gradients(theta, partition, data, gcdc::Execution::kSerial)[0](0); }, 20);
  const double grad_parallel = time_ms([&] { checksum += gcdc::batch_gradients(theta, partition, data, gcdc::Execution::kParallel)[0](0); }, 20);
  std::printf("batch_gradients  serial %9.2f ms  parallel %9.2f ms  speedup %.2fx\n", grad_serial, grad_parallel,
              grad_serial / grad_parallel);
  std::printf("checksum %g\n", checksum);
  return 0;
}
