// Copyright 2026 The gcdc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace gcdc {

using GradientVector = Eigen::VectorXd;

inline constexpr double kDecodeResidualTol = 1e-9;
inline constexpr double kConditionBound = 1e8;

// One coded partial gradient: slot `slot` of cluster `cluster` combines the
// partial gradients of `support` (global mini-batch ids) with `coeffs`.
struct CodewordSpec {
  int cluster = 0;
  int slot = 0;
  std::vector<int> support;
  std::vector<double> coeffs;
};

// Gradient code for one cluster of `size` workers over `size` mini-batches
// with computation load `load`. Slot i covers local batches
// {i, i+1, ..., i+load-1} (mod size); any size-load+1 codewords decode.
class ClusterCode {
 public:
  int size() const noexcept { return size_; }
  int load() const noexcept { return load_; }
  int batch_offset() const noexcept { return batch_offset_; }
  int cluster() const noexcept { return cluster_; }
  // Minimum number of codewords that guarantees recovery.
  int threshold() const noexcept { return size_ - load_ + 1; }
  std::uint64_t seed() const noexcept { return seed_; }

  const std::vector<CodewordSpec>& codewords() const noexcept { return codewords_; }
  const CodewordSpec& codeword(int slot) const { return codewords_.at(slot); }

  // Row `slot` of the size x size encoding matrix over local batch indices.
  Eigen::RowVectorXd encoding_row(int slot) const;
  Eigen::MatrixXd encoding_matrix() const;

  friend bool operator==(const ClusterCode& a, const ClusterCode& b);

 private:
  friend ClusterCode build_cluster_code(int, int, std::uint64_t, int, int);

  int size_ = 0;
  int load_ = 0;
  int batch_offset_ = 0;
  int cluster_ = 0;
  std::uint64_t seed_ = 0;
  std::vector<CodewordSpec> codewords_;
};

// Builds and exhaustively verifies a cyclic gradient code. On verification
// failure the next derived seed is tried; throws CodeConstructionError after
// the retry budget is spent.
ClusterCode build_cluster_code(int size, int load, std::uint64_t seed,
                               int batch_offset = 0, int cluster = 0);

// P independent codes; cluster p owns batches [p*size, (p+1)*size).
std::vector<ClusterCode> build_cluster_codes(int num_clusters, int size, int load,
                                             std::uint64_t seed);

struct DecodingSolution {
  std::vector<int> slots;
  std::vector<double> weights;
  double residual = 0.0;
};

// Weights a with sum_k a_k c_k = (1/size) sum_j g_j for the received slots.
// Least-norm when more than the threshold arrived.
DecodingSolution solve_decoding(const ClusterCode& code, std::span<const int> received);

// Condition number of the stacked received rows (transposed system).
double decoding_condition(const ClusterCode& code, std::span<const int> received);

GradientVector encode(const ClusterCode& code, int slot,
                      std::span<const GradientVector> partials);

using ReceivedCodewords = std::map<int, GradientVector>;  // slot -> codeword

// Cluster-average gradient from one cluster's received codewords.
GradientVector decode_cluster(const ClusterCode& code, const ReceivedCodewords& received);

// (1/P) sum_p cluster averages; throws NotDecodable naming every deficient
// cluster.
GradientVector decode_full_gradient(std::span<const ClusterCode> codes,
                                    std::span<const ReceivedCodewords> received);

}  // namespace gcdc
