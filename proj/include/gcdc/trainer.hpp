// Copyright 2026 The gcdc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "gcdc/code.hpp"
#include "gcdc/config.hpp"
#include "gcdc/partition.hpp"

namespace gcdc {

struct SyntheticDataset {
  Eigen::MatrixXd train_x;  // N_train x d
  Eigen::VectorXd train_y;
  Eigen::MatrixXd test_x;  // N_test x d
  Eigen::VectorXd test_y;
  Eigen::VectorXd true_model;
};

// Standard-normal design and model; targets = X theta* + noise * N(0, 1).
SyntheticDataset generate_synthetic(int n_train, int n_test, int dim, std::uint64_t seed,
                                    double noise = 1.0);

// (1/|D_k|) sum over the batch of 2 (x^T theta - y) x.
GradientVector partial_gradient(const Eigen::VectorXd& theta, BatchRange batch,
                                const SyntheticDataset& data);

// All K partial gradients. The parallel kernel splits batches across OpenMP
// threads; each batch is computed exactly as in the serial loop.
std::vector<GradientVector> batch_gradients(const Eigen::VectorXd& theta, const Partition& partition,
                                            const SyntheticDataset& data,
                                            Execution exec = Execution::kParallel);

// Batch-averaged squared error, the objective whose gradient is decoded.
double batch_averaged_mse(const Eigen::VectorXd& theta, const Partition& partition,
                          const SyntheticDataset& data);
double test_mse(const Eigen::VectorXd& theta, const SyntheticDataset& data);

struct LossPoint {
  int iteration = 0;
  double train_mse = 0.0;
  double test_mse = 0.0;
};

struct TrainingResult {
  std::vector<LossPoint> losses;            // after each update
  std::vector<Eigen::VectorXd> iterates;    // theta_1 .. theta_T
  std::vector<double> completion_times;     // per iteration for the chosen scheme
  double max_decode_error = 0.0;            // relative, decoded vs direct
};

inline constexpr double kDecodeMatchTol = 1e-9;

// Synchronous GD driven by the configured scheme: per iteration the earliest
// sufficient codewords are encoded from the batch gradients and decoded. The
// decoded gradient is checked against a direct evaluation; a mismatch above
// kDecodeMatchTol throws DecodeFailure. Uses seed 0 of the experiment.
TrainingResult train(const ExperimentConfig& config, const SyntheticDataset& data,
                     Execution exec = Execution::kParallel);

std::string loss_csv(const TrainingResult& result);

}  // namespace gcdc
