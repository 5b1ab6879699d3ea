// Copyright 2026 The gcdc Authors
// SPDX-License-Identifier: Apache-2.0

#include "gcdc/assignment.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "gcdc/errors.hpp"
#include "gcdc/rng.hpp"

namespace gcdc {
namespace {

constexpr int kMaxShiftResamples = 1000;

std::vector<int> rotate_right(const std::vector<int>& row, int shift) {
  const int p = static_cast<int>(row.size());
  std::vector<int> out(row.size());
  for (int c = 0; c < p; ++c) out[c] = row[((c - shift) % p + p) % p];
  return out;
}

}  // namespace

std::vector<int> StaticClusters::members(int cluster) const {
  std::vector<int> out;
  out.reserve(layout.size());
  for (const auto& row : layout) out.push_back(row.at(cluster));
  return out;
}

std::vector<int> StaticClusters::batches(int cluster) const {
  std::vector<int> out(cluster_size);
  for (int j = 0; j < cluster_size; ++j) out[j] = cluster * cluster_size + j;
  return out;
}

StaticClusters build_static_clusters(int num_workers, int num_clusters) {
  if (num_clusters < 1 || num_workers < 1 || num_workers % num_clusters != 0) {
    throw ConfigError("build_static_clusters: P must divide K (got K=" +
                      std::to_string(num_workers) + ", P=" + std::to_string(num_clusters) + ")");
  }
  StaticClusters out;
  out.num_workers = num_workers;
  out.num_clusters = num_clusters;
  out.cluster_size = num_workers / num_clusters;
  out.layout.resize(out.cluster_size);
  for (int j = 0; j < out.cluster_size; ++j) {
    auto& row = out.layout[j];
    row.resize(num_clusters);
    const int rot = j % 2;
    for (int c = 0; c < num_clusters; ++c) row[c] = j * num_clusters + (c + rot) % num_clusters;
  }
  return out;
}

ClusterAssignment::ClusterAssignment(StaticClusters base, std::vector<std::vector<int>> shifts)
    : base_(std::move(base)), shifts_(std::move(shifts)) {
  const int p = num_clusters();
  const int l = cluster_size();
  const int k = num_workers();
  if (num_blocks() > p) {
    throw ConfigError("cluster assignment: n=" + std::to_string(num_blocks()) +
                      " exceeds P=" + std::to_string(p) +
                      " (a worker cannot join more than P distinct clusters)");
  }

  matrix_ = base_.layout;
  for (const auto& block : shifts_) {
    if (static_cast<int>(block.size()) != l) throw ConfigError("cluster assignment: one shift per base row");
    for (int j = 0; j < l; ++j) matrix_.push_back(rotate_right(base_.layout[j], block[j]));
  }

  eligible_.assign(static_cast<std::size_t>(k) * p, 0);
  worker_clusters_.assign(k, {});
  for (const auto& row : matrix_) {
    for (int c = 0; c < p; ++c) {
      const int w = row[c];
      auto& cell = eligible_[static_cast<std::size_t>(w) * p + c];
      if (cell) {
        throw ConfigError("cluster assignment: worker " + std::to_string(w + 1) +
                          " assigned twice to cluster " + std::to_string(c + 1));
      }
      cell = 1;
      worker_clusters_[w].push_back(c);
    }
  }
  worker_batches_.assign(k, {});
  for (int w = 0; w < k; ++w) {
    auto& clusters = worker_clusters_[w];
    std::sort(clusters.begin(), clusters.end());
    for (int c : clusters) {
      const auto b = base_.batches(c);
      worker_batches_[w].insert(worker_batches_[w].end(), b.begin(), b.end());
    }
  }
}

ClusterAssignment build_cluster_assignment(const StaticClusters& base, int num_blocks,
                                           std::uint64_t seed) {
  const int p = base.num_clusters;
  if (num_blocks < 1 || num_blocks > p) {
    throw ConfigError("build_cluster_assignment: need 1 <= n <= P (got n=" +
                      std::to_string(num_blocks) + ", P=" + std::to_string(p) + ")");
  }
  Rng rng(seed);
  std::uniform_int_distribution<int> shift_dist(1, std::max(1, p - 1));
  std::vector<std::vector<int>> shifts(num_blocks - 1, std::vector<int>(base.cluster_size));
  for (int b = 0; b + 1 < num_blocks; ++b) {
    for (int j = 0; j < base.cluster_size; ++j) {
      // Base rows hold disjoint workers, so a collision can only come from an
      // earlier block reusing this row's shift.
      int attempts = 0;
      while (true) {
        const int s = shift_dist(rng);
        bool clash = false;
        for (int prev = 0; prev < b; ++prev) clash = clash || shifts[prev][j] == s;
        if (!clash) {
          shifts[b][j] = s;
          break;
        }
        if (++attempts >= kMaxShiftResamples) {
          throw ConfigError("build_cluster_assignment: could not draw collision-free shifts");
        }
      }
    }
  }
  return ClusterAssignment(base, std::move(shifts));
}

std::vector<int> eligible_workers(const ClusterAssignment& assign, int cluster) {
  if (cluster < 0 || cluster >= assign.num_clusters()) throw ConfigError("eligible_workers: cluster out of range");
  std::vector<int> out;
  out.reserve(assign.matrix().size());
  for (const auto& row : assign.matrix()) out.push_back(row[cluster]);
  return out;
}

std::string assignment_csv(const ClusterAssignment& assign) {
  std::ostringstream out;
  for (int c = 0; c < assign.num_clusters(); ++c) out << (c ? "," : "") << "cluster_" << c + 1;
  out << '\n';
  for (const auto& row : assign.matrix()) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << row[c] + 1;
    out << '\n';
  }
  return out.str();
}

}  // namespace gcdc
