// Copyright 2026 The gcdc Authors
// SPDX-License-Identifier: Apache-2.0

#include "gcdc/trainer.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <random>

#include "gcdc/errors.hpp"
#include "gcdc/rng.hpp"
#include "gcdc/simulator.hpp"

namespace gcdc {
namespace {

Eigen::MatrixXd normal_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = normal(rng);
  }
  return m;
}

Eigen::VectorXd targets(const Eigen::MatrixXd& x, const Eigen::VectorXd& model, double noise, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd y = x * model;
  for (Eigen::Index i = 0; i < y.size(); ++i) y(i) += noise * normal(rng);
  return y;
}

// Direct route: one pass over the full design with per-sample weights
// 2 / (K |D_k|), independent of the per-batch kernel and of the code.
GradientVector direct_full_gradient(const Eigen::VectorXd& theta, const Partition& partition,
                                    const SyntheticDataset& data) {
  Eigen::VectorXd residual = data.train_x * theta - data.train_y;
  const double k = static_cast<double>(partition.num_batches());
  for (const auto& b : partition.batches) {
    residual.segment(b.begin, b.size()) *= 2.0 / (k * static_cast<double>(b.size()));
  }
  return data.train_x.transpose() * residual;
}

}  // namespace

SyntheticDataset generate_synthetic(int n_train, int n_test, int dim, std::uint64_t seed, double noise) {
  if (n_train < 1 || n_test < 1 || dim < 1) throw ConfigError("generate_synthetic: sizes must be positive");
  Rng rng(seed);
  SyntheticDataset out;
  out.true_model = normal_matrix(dim, 1, rng).col(0);
  out.train_x = normal_matrix(n_train, dim, rng);
  out.train_y = targets(out.train_x, out.true_model, noise, rng);
  out.test_x = normal_matrix(n_test, dim, rng);
  out.test_y = targets(out.test_x, out.true_model, noise, rng);
  return out;
}

GradientVector partial_gradient(const Eigen::VectorXd& theta, BatchRange batch,
                                const SyntheticDataset& data) {
  const auto x = data.train_x.middleRows(batch.begin, batch.size());
  const Eigen::VectorXd residual = x * theta - data.train_y.segment(batch.begin, batch.size());
  return (2.0 / static_cast<double>(batch.size())) * (x.transpose() * residual);
}

std::vector<GradientVector> batch_gradients(const Eigen::VectorXd& theta, const Partition& partition,
                                            const SyntheticDataset& data, Execution exec) {
  const int k = static_cast<int>(partition.num_batches());
  std::vector<GradientVector> out(k);
  if (exec == Execution::kSerial) {
    for (int b = 0; b < k; ++b) out[b] = partial_gradient(theta, partition.batches[b], data);
  } else {
#pragma omp parallel for schedule(static)
    for (int b = 0; b < k; ++b) out[b] = partial_gradient(theta, partition.batches[b], data);
  }
  return out;
}

double batch_averaged_mse(const Eigen::VectorXd& theta, const Partition& partition,
                          const SyntheticDataset& data) {
  const Eigen::VectorXd residual = data.train_x * theta - data.train_y;
  double total = 0.0;
  for (const auto& b : partition.batches) {
    total += residual.segment(b.begin, b.size()).squaredNorm() / static_cast<double>(b.size());
  }
  return total / static_cast<double>(partition.num_batches());
}

double test_mse(const Eigen::VectorXd& theta, const SyntheticDataset& data) {
  return (data.test_x * theta - data.test_y).squaredNorm() / static_cast<double>(data.test_y.size());
}

TrainingResult train(const ExperimentConfig& config, const SyntheticDataset& data, Execution exec) {
  config.validate();
  const TrainerParams& params = config.trainer;
  if (params.scheme == Scheme::kLB) throw ConfigError("train: LB has no code to decode");
  if (data.train_x.rows() < config.num_workers) throw ConfigError("train: fewer samples than batches");

  const int k = config.num_workers;
  const int r = config.load;
  const Partition partition = partition_dataset(static_cast<std::size_t>(data.train_x.rows()), k);
  const std::uint64_t code_seed = derive_seed(config.master_seed, 0, static_cast<std::uint64_t>(Stream::kCode));

  const bool single = params.scheme == Scheme::kGC;
  const int clusters = single ? 1 : config.num_clusters;
  const int l = k / clusters;
  const std::vector<ClusterCode> codes = build_cluster_codes(clusters, l, r, code_seed);

  ExperimentConfig sim_config = config;
  sim_config.schemes = {params.scheme};
  SeedSimulation sim(sim_config, 0, params.scheme == Scheme::kGCDC);
  const StaticClusters base = build_static_clusters(k, config.num_clusters);

  Placement fixed;
  if (single) {
    fixed.cluster_members.assign(1, std::vector<int>(k));
    std::iota(fixed.cluster_members[0].begin(), fixed.cluster_members[0].end(), 0);
    for (int w = 0; w < k; ++w) fixed.worker_codeword.push_back({0, w});
  } else {
    fixed = static_placement(base);
  }

  TrainingResult result;
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(data.train_x.cols());
  for (int t = 1; t <= config.iterations; ++t) {
    const IterationContext ctx = sim.next();
    const Placement& placement = params.scheme == Scheme::kGCDC ? ctx.dynamic : fixed;

    const std::vector<GradientVector> partials = batch_gradients(theta, partition, data, exec);

    std::vector<ReceivedCodewords> received(clusters);
    double finish = 0.0;
    for (int c = 0; c < clusters; ++c) {
      std::vector<int> members = placement.cluster_members[c];
      std::stable_sort(members.begin(), members.end(),
                       [&](int a, int b) { return ctx.finish_times[a] < ctx.finish_times[b]; });
      const int needed = codes[c].threshold();
      for (int j = 0; j < needed; ++j) {
        const int w = members[j];
        const int slot = placement.worker_codeword[w].slot;
        std::vector<GradientVector> inputs;
        for (int batch : codes[c].codeword(slot).support) inputs.push_back(partials[batch]);
        received[c].emplace(slot, encode(codes[c], slot, inputs));
        finish = std::max(finish, ctx.finish_times[w]);
      }
    }
    const GradientVector decoded = decode_full_gradient(codes, received);
    const GradientVector direct = direct_full_gradient(theta, partition, data);
    const double err = (decoded - direct).norm() / std::max(1.0, direct.norm());
    result.max_decode_error = std::max(result.max_decode_error, err);
    if (!(err <= kDecodeMatchTol)) {
      throw DecodeFailure("train: decoded gradient deviates from direct gradient at iteration " +
                          std::to_string(t));
    }

    theta -= params.learning_rate * decoded;
    result.iterates.push_back(theta);
    result.completion_times.push_back(finish);
    result.losses.push_back({t, batch_averaged_mse(theta, partition, data), test_mse(theta, data)});
  }
  return result;
}

std::string loss_csv(const TrainingResult& result) {
  std::string out = "iteration,train_mse,test_mse\n";
  char buf[96];
  for (const auto& p : result.losses) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g\n", p.iteration, p.train_mse, p.test_mse);
    out += buf;
  }
  return out;
}

}  // namespace gcdc
