// Copyright 2026 The gcdc Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <numeric>
#include <random>

#include "doctest.h"
#include "gcdc/code.hpp"
#include "gcdc/errors.hpp"
#include "oracles.hpp"

namespace {

std::vector<oracle::Row> rows_of(const gcdc::ClusterCode& code, const std::vector<int>& slots) {
  std::vector<oracle::Row> rows;
  for (int s : slots) {
    oracle::Row row(code.size(), 0.0);
    const auto& cw = code.codeword(s);
    for (std::size_t j = 0; j < cw.support.size(); ++j) row[cw.support[j] - code.batch_offset()] += cw.coeffs[j];
    rows.push_back(std::move(row));
  }
  return rows;
}

template <typename Fn>
void each_subset(int n, int k, Fn fn) {
  std::vector<int> mask(n, 0);
  std::fill(mask.begin(), mask.begin() + k, 1);
  do {
    std::vector<int> subset;
    for (int i = 0; i < n; ++i) {
      if (mask[i]) subset.push_back(i);
    }
    fn(subset);
  } while (std::prev_permutation(mask.begin(), mask.end()));
}

gcdc::GradientVector random_vector(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  gcdc::GradientVector v(d);
  for (int i = 0; i < d; ++i) v(i) = normal(rng);
  return v;
}

}  // namespace

TEST_CASE("full replication when r equals l") {
  const auto code = gcdc::build_cluster_code(3, 3, 0);
  for (const auto& cw : code.codewords()) {
    std::vector<int> sorted = cw.support;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == std::vector<int>{0, 1, 2});
  }
  for (int s = 0; s < 3; ++s) CHECK_NOTHROW(gcdc::solve_decoding(code, std::vector<int>{s}));
}

TEST_CASE("l=3 r=2 cyclic supports and pairwise decoding") {
  const auto code = gcdc::build_cluster_code(3, 2, 0);
  CHECK(code.codeword(0).support == std::vector<int>{0, 1});
  CHECK(code.codeword(1).support == std::vector<int>{1, 2});
  CHECK(code.codeword(2).support == std::vector<int>{2, 0});
  for (const auto& cw : code.codewords()) {
    for (double c : cw.coeffs) CHECK(c != 0.0);
  }
  each_subset(3, 2, [&](const std::vector<int>& s) {
    const auto sol = gcdc::solve_decoding(code, s);
    CHECK(sol.residual < 1e-9);
    CHECK(oracle::span_residual(rows_of(code, s), 3) < 1e-9);
  });
}

TEST_CASE("l=3 r=2 decoding weights match a direct least-squares solve") {
  const auto code = gcdc::build_cluster_code(3, 2, 0);
  const std::vector<int> received{0, 1};
  const auto sol = gcdc::solve_decoding(code, received);
  const auto expected = oracle::least_squares_weights(rows_of(code, received), 3);
  REQUIRE(sol.weights.size() == 2);
  CHECK(sol.weights[0] == doctest::Approx(expected[0]).epsilon(1e-9));
  CHECK(sol.weights[1] == doctest::Approx(expected[1]).epsilon(1e-9));
}

TEST_CASE("l=5 r=3 seed 7: every 3-subset decodes") {
  const auto code = gcdc::build_cluster_code(5, 3, 7);
  int count = 0;
  each_subset(5, 3, [&](const std::vector<int>& s) {
    ++count;
    CHECK(oracle::span_residual(rows_of(code, s), 5) < 1e-9);
    CHECK(gcdc::solve_decoding(code, s).residual < 1e-9);
    CHECK(gcdc::decoding_condition(code, s) < gcdc::kConditionBound);
  });
  CHECK(count == 10);
}

TEST_CASE("below threshold and malformed received sets") {
  const auto code = gcdc::build_cluster_code(3, 2, 0);
  CHECK_THROWS_AS(gcdc::solve_decoding(code, std::vector<int>{0}), gcdc::NotEnoughResults);
  CHECK_THROWS_AS(gcdc::solve_decoding(code, std::vector<int>{0, 0}), gcdc::ConfigError);
  CHECK_THROWS_AS(gcdc::solve_decoding(code, std::vector<int>{0, 3}), gcdc::ConfigError);
  CHECK_THROWS_AS(gcdc::build_cluster_code(3, 4, 0), gcdc::ConfigError);
  CHECK_THROWS_AS(gcdc::build_cluster_code(3, 0, 0), gcdc::ConfigError);
}

TEST_CASE("all codewords received still decodes (least-norm)") {
  for (auto [l, r] : {std::pair{3, 2}, {4, 3}, {6, 2}, {5, 5}}) {
    const auto code = gcdc::build_cluster_code(l, r, 3);
    std::vector<int> all(l);
    std::iota(all.begin(), all.end(), 0);
    CHECK(gcdc::solve_decoding(code, all).residual < 1e-9);
  }
}

TEST_CASE("subset-decodability is exhaustive for l <= 8") {
  for (int l = 1; l <= 8; ++l) {
    for (int r = 1; r <= l; ++r) {
      const auto code = gcdc::build_cluster_code(l, r, 100 + l * 10 + r);
      each_subset(l, l - r + 1, [&](const std::vector<int>& s) {
        CHECK(oracle::span_residual(rows_of(code, s), l) < 1e-9);
        CHECK_NOTHROW(gcdc::solve_decoding(code, s));
      });
    }
  }
}

TEST_CASE("code tolerates exactly r-1 missing codewords") {
  for (int l = 2; l <= 7; ++l) {
    for (int r = 1; r < l; ++r) {
      const auto code = gcdc::build_cluster_code(l, r, 500 + l * 10 + r);
      bool found_failure = false;
      each_subset(l, l - r, [&](const std::vector<int>& s) {
        if (oracle::span_residual(rows_of(code, s), l) > 1e-6) found_failure = true;
      });
      CAPTURE(l);
      CAPTURE(r);
      CHECK(found_failure);
    }
  }
}

TEST_CASE("same seed gives the same code") {
  CHECK(gcdc::build_cluster_code(5, 3, 42) == gcdc::build_cluster_code(5, 3, 42));
  CHECK_FALSE(gcdc::build_cluster_code(5, 3, 42) == gcdc::build_cluster_code(5, 3, 43));
}

TEST_CASE("encode: scalar case, zeros and shape errors") {
  std::mt19937_64 rng(5);
  const auto single = gcdc::build_cluster_code(4, 1, 0);
  const auto g = random_vector(6, rng);
  const double c = single.codeword(2).coeffs[0];
  const std::vector<gcdc::GradientVector> one{g};
  CHECK((gcdc::encode(single, 2, one) - c * g).norm() == doctest::Approx(0.0));

  const auto code = gcdc::build_cluster_code(3, 2, 0);
  const std::vector<gcdc::GradientVector> zeros{gcdc::GradientVector::Zero(4), gcdc::GradientVector::Zero(4)};
  CHECK(gcdc::encode(code, 1, zeros).isZero());

  const std::vector<gcdc::GradientVector> ragged{gcdc::GradientVector::Zero(4), gcdc::GradientVector::Zero(3)};
  CHECK_THROWS_AS(gcdc::encode(code, 0, ragged), gcdc::ShapeError);
  CHECK_THROWS_AS(gcdc::encode(code, 0, one), gcdc::ShapeError);
}

TEST_CASE("encode then decode reproduces the cluster average") {
  std::mt19937_64 rng(9);
  const auto code = gcdc::build_cluster_code(5, 3, 7, 10, 2);
  std::vector<gcdc::GradientVector> batch(5);
  gcdc::GradientVector avg = gcdc::GradientVector::Zero(8);
  for (auto& b : batch) {
    b = random_vector(8, rng);
    avg += b / 5.0;
  }
  each_subset(5, 3, [&](const std::vector<int>& s) {
    gcdc::ReceivedCodewords received;
    for (int slot : s) {
      std::vector<gcdc::GradientVector> inputs;
      for (int id : code.codeword(slot).support) inputs.push_back(batch[id - 10]);
      received.emplace(slot, gcdc::encode(code, slot, inputs));
    }
    CHECK((gcdc::decode_cluster(code, received) - avg).norm() / avg.norm() < 1e-9);
  });
}

TEST_CASE("decode_full_gradient over clusters") {
  std::mt19937_64 rng(21);
  const int p = 4, l = 3, r = 2, d = 16;
  const auto codes = gcdc::build_cluster_codes(p, l, r, 77);
  std::vector<gcdc::GradientVector> batch(p * l);
  gcdc::GradientVector full = gcdc::GradientVector::Zero(d);
  for (auto& b : batch) {
    b = random_vector(d, rng);
    full += b / static_cast<double>(p * l);
  }
  auto codeword = [&](int c, int slot) {
    std::vector<gcdc::GradientVector> inputs;
    for (int id : codes[c].codeword(slot).support) inputs.push_back(batch[id]);
    return gcdc::encode(codes[c], slot, inputs);
  };

  SUBCASE("every codeword") {
    std::vector<gcdc::ReceivedCodewords> received(p);
    for (int c = 0; c < p; ++c) {
      for (int s = 0; s < l; ++s) received[c].emplace(s, codeword(c, s));
    }
    CHECK((gcdc::decode_full_gradient(codes, received) - full).norm() / full.norm() < 1e-12);
  }
  SUBCASE("exactly the threshold per cluster") {
    std::vector<gcdc::ReceivedCodewords> received(p);
    for (int c = 0; c < p; ++c) {
      for (int s = c % l, taken = 0; taken < l - r + 1; s = (s + 1) % l, ++taken) received[c].emplace(s, codeword(c, s));
    }
    CHECK((gcdc::decode_full_gradient(codes, received) - full).norm() / full.norm() < 1e-9);
  }
  SUBCASE("one deficient cluster is named") {
    std::vector<gcdc::ReceivedCodewords> received(p);
    for (int c = 0; c < p; ++c) {
      const int take = c == 2 ? l - r : l - r + 1;
      for (int s = 0; s < take; ++s) received[c].emplace(s, codeword(c, s));
    }
    try {
      gcdc::decode_full_gradient(codes, received);
      FAIL("expected NotDecodable");
    } catch (const gcdc::NotDecodable& e) {
      CHECK(e.clusters() == std::vector<int>{2});
    }
  }
}
