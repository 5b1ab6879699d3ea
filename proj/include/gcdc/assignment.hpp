// Copyright 2026 The gcdc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace gcdc {

// Worker ids and cluster ids are 0-based throughout the library; text dumps
// print them 1-based.
using WorkerMatrix = std::vector<std::vector<int>>;  // rows x clusters

// P disjoint clusters of l = K/P workers. layout[j][p] is the worker holding
// slot j of cluster p; cluster p owns batches [p*l, (p+1)*l).
struct StaticClusters {
  int num_workers = 0;
  int num_clusters = 0;
  int cluster_size = 0;
  WorkerMatrix layout;

  std::vector<int> members(int cluster) const;
  std::vector<int> batches(int cluster) const;
};

// Row j holds workers j*P .. j*P+P-1; odd rows are rotated left by one, which
// reproduces the worked K=12, P=4 layout {1,6,9},{2,7,10},{3,8,11},{4,5,12}.
StaticClusters build_static_clusters(int num_workers, int num_clusters);

// lxn rows x P eligibility matrix: block 0 is the static layout and every
// further block circularly shifts each base row. Each worker sits in exactly
// n distinct clusters and stores the n*l batches those clusters own.
class ClusterAssignment {
 public:
  ClusterAssignment(StaticClusters base, std::vector<std::vector<int>> shifts);

  int num_workers() const noexcept { return base_.num_workers; }
  int num_clusters() const noexcept { return base_.num_clusters; }
  int cluster_size() const noexcept { return base_.cluster_size; }
  int num_blocks() const noexcept { return static_cast<int>(shifts_.size()) + 1; }

  const StaticClusters& base() const noexcept { return base_; }
  const WorkerMatrix& matrix() const noexcept { return matrix_; }
  // shifts()[b-1][j]: right-rotation applied to base row j in block b.
  const std::vector<std::vector<int>>& shifts() const noexcept { return shifts_; }

  bool eligible(int worker, int cluster) const {
    return eligible_[static_cast<std::size_t>(worker) * num_clusters() + cluster] != 0;
  }
  // Ascending cluster ids.
  const std::vector<int>& worker_clusters(int worker) const { return worker_clusters_.at(worker); }
  // Ascending batch ids, size n*l.
  const std::vector<int>& worker_batches(int worker) const { return worker_batches_.at(worker); }

 private:
  StaticClusters base_;
  std::vector<std::vector<int>> shifts_;
  WorkerMatrix matrix_;
  std::vector<unsigned char> eligible_;
  std::vector<std::vector<int>> worker_clusters_;
  std::vector<std::vector<int>> worker_batches_;
};

// Shift amounts drawn uniformly from {1, ..., P-1}, resampled per row until no
// worker lands twice in one cluster.
ClusterAssignment build_cluster_assignment(const StaticClusters& base, int num_blocks,
                                           std::uint64_t seed);

// Column p of the matrix, in row order.
std::vector<int> eligible_workers(const ClusterAssignment& assign, int cluster);

std::string assignment_csv(const ClusterAssignment& assign);

}  // namespace gcdc
