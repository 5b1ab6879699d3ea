// Copyright 2026 The gcdc Authors
// SPDX-License-Identifier: Apache-2.0

#include <random>

#include "doctest.h"
#include "gcdc/errors.hpp"
#include "gcdc/simulator.hpp"
#include "gcdc/trainer.hpp"

namespace {

gcdc::ExperimentConfig small_training_config(gcdc::Scheme scheme) {
  gcdc::ExperimentConfig cfg;
  cfg.iterations = 60;
  cfg.num_seeds = 1;
  cfg.trainer.enabled = true;
  cfg.trainer.n_train = 240;
  cfg.trainer.n_test = 40;
  cfg.trainer.dim = 20;
  cfg.trainer.scheme = scheme;
  return cfg;
}

// Uncoded GD written directly from the objective: per-sample loops.
std::vector<Eigen::VectorXd> uncoded_descent(const gcdc::SyntheticDataset& data, int k, double eta, int steps) {
  const auto part = gcdc::partition_dataset(data.train_x.rows(), k);
  const Eigen::Index d = data.train_x.cols();
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(d);
  std::vector<Eigen::VectorXd> out;
  for (int t = 0; t < steps; ++t) {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(d);
    for (const auto& b : part.batches) {
      for (std::size_t i = b.begin; i < b.end; ++i) {
        double pred = 0.0;
        for (Eigen::Index j = 0; j < d; ++j) pred += data.train_x(i, j) * theta(j);
        const double scale = 2.0 * (pred - data.train_y(i)) / (static_cast<double>(b.size()) * k);
        for (Eigen::Index j = 0; j < d; ++j) g(j) += scale * data.train_x(i, j);
      }
    }
    theta -= eta * g;
    out.push_back(theta);
  }
  return out;
}

}  // namespace

TEST_CASE("synthetic dataset shapes and determinism") {
  const auto a = gcdc::generate_synthetic(50, 10, 7, 3);
  CHECK(a.train_x.rows() == 50);
  CHECK(a.train_x.cols() == 7);
  CHECK(a.train_y.size() == 50);
  CHECK(a.test_x.rows() == 10);
  CHECK(a.test_y.size() == 10);
  CHECK(a.true_model.size() == 7);
  const auto b = gcdc::generate_synthetic(50, 10, 7, 3);
  CHECK(a.train_x == b.train_x);
  CHECK(a.train_y == b.train_y);
  CHECK(a.test_y == b.test_y);
  CHECK_THROWS_AS(gcdc::generate_synthetic(0, 10, 7, 3), gcdc::ConfigError);
}

TEST_CASE("full-size dataset shapes") {
  const auto data = gcdc::generate_synthetic(2000, 400, 1000, 1);
  CHECK(data.train_x.rows() == 2000);
  CHECK(data.train_x.cols() == 1000);
  CHECK(data.test_x.rows() == 400);
  CHECK(data.test_y.size() == 400);
}

TEST_CASE("noiseless one-dimensional targets are proportional to inputs") {
  const auto data = gcdc::generate_synthetic(30, 5, 1, 8, 0.0);
  for (Eigen::Index i = 0; i < 30; ++i) {
    CHECK(data.train_y(i) == doctest::Approx(data.train_x(i, 0) * data.true_model(0)));
  }
}

TEST_CASE("partial gradient") {
  const auto data = gcdc::generate_synthetic(30, 5, 4, 8, 0.0);
  CHECK(gcdc::partial_gradient(data.true_model, {0, 10}, data).norm() < 1e-12);

  const Eigen::VectorXd theta = Eigen::VectorXd::Constant(4, 0.3);
  const auto single = gcdc::partial_gradient(theta, {5, 6}, data);
  const Eigen::VectorXd x = data.train_x.row(5).transpose();
  const Eigen::VectorXd expected = 2.0 * (x.dot(theta) - data.train_y(5)) * x;
  CHECK((single - expected).norm() < 1e-12);
}

TEST_CASE("serial and parallel batch gradients are bit-identical") {
  const auto data = gcdc::generate_synthetic(200, 5, 30, 2);
  const auto part = gcdc::partition_dataset(200, 12);
  const Eigen::VectorXd theta = Eigen::VectorXd::Constant(30, -0.1);
  const auto a = gcdc::batch_gradients(theta, part, data, gcdc::Execution::kSerial);
  const auto b = gcdc::batch_gradients(theta, part, data, gcdc::Execution::kParallel);
  for (std::size_t k = 0; k < a.size(); ++k) CHECK(a[k] == b[k]);
}

TEST_CASE("coded training follows uncoded descent for every coded scheme") {
  for (auto scheme : {gcdc::Scheme::kGCDC, gcdc::Scheme::kGCSC, gcdc::Scheme::kGC}) {
    const auto cfg = small_training_config(scheme);
    const auto data = gcdc::generate_synthetic(cfg.trainer.n_train, cfg.trainer.n_test, cfg.trainer.dim, 4);
    const auto result = gcdc::train(cfg, data);
    const auto oracle = uncoded_descent(data, cfg.num_workers, cfg.trainer.learning_rate, cfg.iterations);
    REQUIRE(result.iterates.size() == oracle.size());
    double worst = 0.0;
    for (std::size_t t = 0; t < oracle.size(); ++t) {
      worst = std::max(worst, (result.iterates[t] - oracle[t]).norm() / std::max(1.0, oracle[t].norm()));
    }
    CAPTURE(gcdc::scheme_name(scheme));
    CHECK(worst < 1e-9);
    CHECK(result.max_decode_error < gcdc::kDecodeMatchTol);
    for (std::size_t t = 1; t < result.losses.size(); ++t) {
      CHECK(result.losses[t].train_mse < result.losses[t - 1].train_mse);
    }
  }
}

TEST_CASE("zero learning rate keeps the model fixed") {
  auto cfg = small_training_config(gcdc::Scheme::kGCDC);
  cfg.trainer.learning_rate = 0.0;
  cfg.iterations = 5;
  const auto data = gcdc::generate_synthetic(cfg.trainer.n_train, cfg.trainer.n_test, cfg.trainer.dim, 4);
  const auto result = gcdc::train(cfg, data);
  for (const auto& theta : result.iterates) CHECK(theta.isZero());
  for (const auto& p : result.losses) CHECK(p.train_mse == result.losses.front().train_mse);
}

TEST_CASE("completion times follow the scheme's sufficient codewords") {
  const auto cfg = small_training_config(gcdc::Scheme::kGCDC);
  const auto data = gcdc::generate_synthetic(cfg.trainer.n_train, cfg.trainer.n_test, cfg.trainer.dim, 4);
  const auto result = gcdc::train(cfg, data);
  gcdc::SeedSimulation sim(cfg, 0, true);
  for (int t = 0; t < cfg.iterations; ++t) {
    const auto ctx = sim.next();
    CHECK(result.completion_times[t] ==
          gcdc::completion_time_clustered(ctx.finish_times, ctx.dynamic.cluster_members, cfg.load));
  }
}

TEST_CASE("lower bound cannot drive training") {
  auto cfg = small_training_config(gcdc::Scheme::kLB);
  const auto data = gcdc::generate_synthetic(cfg.trainer.n_train, cfg.trainer.n_test, cfg.trainer.dim, 4);
  CHECK_THROWS_AS(gcdc::train(cfg, data), gcdc::ConfigError);
}

TEST_CASE("loss CSV") {
  gcdc::TrainingResult r;
  r.losses = {{1, 2.0, 3.0}, {2, 1.5, 2.5}};
  CHECK(gcdc::loss_csv(r) == "iteration,train_mse,test_mse\n1,2,3\n2,1.5,2.5\n");
}
