// Copyright 2026 The gcdc Authors
// SPDX-License-Identifier: Apache-2.0

#include "gcdc/placement.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <numeric>

#include "json.hpp"

namespace gcdc {
namespace {

class PlacementState {
 public:
  explicit PlacementState(const ClusterAssignment& assign)
      : assign_(assign),
        capacity_(assign.num_clusters(), assign.cluster_size()),
        owner_(assign.num_workers(), -1),
        members_(assign.num_clusters()) {}

  const std::vector<int>& capacity() const { return capacity_; }
  bool placed(int w) const { return owner_[w] >= 0; }
  std::vector<bool> placed_mask() const {
    std::vector<bool> out(owner_.size());
    for (std::size_t w = 0; w < owner_.size(); ++w) out[w] = owner_[w] >= 0;
    return out;
  }

  void put(int w, int c) {
    members_[c].insert(std::upper_bound(members_[c].begin(), members_[c].end(), w), w);
    owner_[w] = c;
    --capacity_[c];
  }

  void move(int w, int to) {
    auto& from = members_[owner_[w]];
    from.erase(std::find(from.begin(), from.end(), w));
    ++capacity_[owner_[w]];
    put(w, to);
  }

  // Turn-taking placement of one group; each turn the cluster claims the
  // lowest-indexed eligible unplaced worker of the group.
  void place_group(const std::vector<int>& group) {
    if (group.empty()) return;
    const std::vector<int> order = availability_order(assign_, group, capacity_, placed_mask());
    std::size_t remaining = std::count_if(group.begin(), group.end(), [&](int w) { return !placed(w); });
    while (remaining > 0) {
      bool progress = false;
      for (int c : order) {
        if (remaining == 0) break;
        if (capacity_[c] == 0) continue;
        auto it = std::find_if(group.begin(), group.end(),
                               [&](int w) { return !placed(w) && assign_.eligible(w, c); });
        if (it == group.end()) continue;
        put(*it, c);
        --remaining;
        progress = true;
      }
      if (!progress) break;
    }
  }

  bool resolve(int w) {
    const int p = assign_.num_clusters();
    for (int q = 0; q < p; ++q) {
      if (capacity_[q] > 0 && assign_.eligible(w, q)) {
        put(w, q);
        return true;
      }
    }
    // Single swap: a donor q' gives up w' to the unfilled q and takes w.
    for (int q = 0; q < p; ++q) {
      if (capacity_[q] == 0) continue;
      for (int donor = 0; donor < p; ++donor) {
        if (donor == q || !assign_.eligible(w, donor)) continue;
        for (int other : members_[donor]) {
          if (assign_.eligible(other, q)) {
            move(other, q);
            put(w, donor);
            return true;
          }
        }
      }
    }
    return resolve_chain(w);
  }

  Placement finish() const {
    Placement out;
    out.cluster_members = members_;
    out.worker_codeword.assign(owner_.size(), {});
    for (std::size_t c = 0; c < members_.size(); ++c) {
      for (std::size_t j = 0; j < members_[c].size(); ++j) {
        out.worker_codeword[members_[c][j]] = {static_cast<int>(c), static_cast<int>(j)};
      }
    }
    return out;
  }

 private:
  // Breadth-first search for an augmenting chain w -> c1 (evict m1) -> c2
  // (evict m2) -> ... -> unfilled cluster, at most K moves long.
  bool resolve_chain(int w) {
    const int p = assign_.num_clusters();
    struct Parent {
      int from_cluster;
      int worker;
      int depth;
    };
    std::vector<std::optional<Parent>> parent(p);
    std::deque<int> queue;
    for (int c : assign_.worker_clusters(w)) {
      parent[c] = Parent{-1, w, 1};
      queue.push_back(c);
    }
    while (!queue.empty()) {
      const int c = queue.front();
      queue.pop_front();
      if (parent[c]->depth >= assign_.num_workers()) continue;
      for (int m : members_[c]) {
        for (int next : assign_.worker_clusters(m)) {
          if (next == c) continue;
          if (capacity_[next] > 0) {
            augment(c, m, next, parent);
            return true;
          }
          if (parent[next]) continue;
          parent[next] = Parent{c, m, parent[c]->depth + 1};
          queue.push_back(next);
        }
      }
    }
    return false;
  }

  template <typename Parents>
  void augment(int c, int m, int target, const Parents& parent) {
    move(m, target);
    while (true) {
      const auto& link = *parent[c];
      if (link.from_cluster < 0) {
        put(link.worker, c);
        return;
      }
      move(link.worker, c);
      c = link.from_cluster;
    }
  }

  const ClusterAssignment& assign_;
  std::vector<int> capacity_;
  std::vector<int> owner_;
  std::vector<std::vector<int>> members_;
};

}  // namespace

std::vector<int> availability_order(const ClusterAssignment& assign, const std::vector<int>& group,
                                    const std::vector<int>& capacity,
                                    const std::vector<bool>& placed) {
  const int p = assign.num_clusters();
  std::vector<int> counts(p, 0);
  std::vector<int> order;
  for (int c = 0; c < p; ++c) {
    if (capacity[c] <= 0) continue;
    for (int w : group) {
      if ((placed.empty() || !placed[w]) && assign.eligible(w, c)) ++counts[c];
    }
    order.push_back(c);
  }
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return counts[a] < counts[b]; });
  return order;
}

Placement static_placement(const StaticClusters& base) {
  Placement out;
  out.cluster_members.resize(base.num_clusters);
  out.worker_codeword.assign(base.num_workers, {});
  for (int c = 0; c < base.num_clusters; ++c) {
    auto members = base.members(c);
    std::sort(members.begin(), members.end());
    for (std::size_t j = 0; j < members.size(); ++j) out.worker_codeword[members[j]] = {c, static_cast<int>(j)};
    out.cluster_members[c] = std::move(members);
  }
  return out;
}

Placement greedy_place(const ClusterAssignment& assign, const StragglerVector& observed) {
  const int k = assign.num_workers();
  std::vector<int> fast, slow;
  for (int w = 0; w < k; ++w) (observed.at(w) ? fast : slow).push_back(w);
  const bool fast_first = fast.size() >= slow.size();

  PlacementState state(assign);
  state.place_group(fast_first ? fast : slow);
  state.place_group(fast_first ? slow : fast);

  for (int w = 0; w < k; ++w) {
    if (state.placed(w)) continue;
    if (!state.resolve(w)) {
      Placement fallback = static_placement(assign.base());
      fallback.fallback_used = true;
      return fallback;
    }
  }
  return state.finish();
}

bool full_recovery_possible(const Placement& placement, const StragglerVector& states, int load) {
  for (const auto& members : placement.cluster_members) {
    const int needed = static_cast<int>(members.size()) - load + 1;
    int fast = 0;
    for (int w : members) fast += states[w] != 0;
    if (fast < needed) return false;
  }
  return true;
}

std::vector<int> straggler_spread(const Placement& placement, const StragglerVector& states) {
  std::vector<int> out;
  out.reserve(placement.cluster_members.size());
  for (const auto& members : placement.cluster_members) {
    int slow = 0;
    for (int w : members) slow += states[w] == 0;
    out.push_back(slow);
  }
  return out;
}

std::optional<std::string> validate_placement(const ClusterAssignment& assign,
                                              const Placement& placement) {
  const int k = assign.num_workers();
  const int p = assign.num_clusters();
  const int l = assign.cluster_size();
  if (static_cast<int>(placement.cluster_members.size()) != p) return "wrong number of clusters";
  if (static_cast<int>(placement.worker_codeword.size()) != k) return "worker_codeword size mismatch";
  std::vector<int> seen(k, 0);
  for (int c = 0; c < p; ++c) {
    const auto& members = placement.cluster_members[c];
    if (static_cast<int>(members.size()) != l) return "cluster " + std::to_string(c + 1) + " does not hold l workers";
    std::vector<int> slot_used(l, 0);
    for (int w : members) {
      if (w < 0 || w >= k) return "worker id out of range";
      if (seen[w]++) return "worker " + std::to_string(w + 1) + " placed twice";
      if (!assign.eligible(w, c)) {
        return "worker " + std::to_string(w + 1) + " not eligible for cluster " + std::to_string(c + 1);
      }
      const CodewordRef ref = placement.worker_codeword[w];
      if (ref.cluster != c) return "worker " + std::to_string(w + 1) + " codeword from another cluster";
      if (ref.slot < 0 || ref.slot >= l || slot_used[ref.slot]++) {
        return "cluster " + std::to_string(c + 1) + " slots are not a bijection";
      }
    }
  }
  for (int w = 0; w < k; ++w) {
    if (!seen[w]) return "worker " + std::to_string(w + 1) + " not placed";
  }
  return std::nullopt;
}

int brute_force_min_max_load(const ClusterAssignment& assign, const StragglerVector& states) {
  const int k = assign.num_workers();
  const int p = assign.num_clusters();
  std::vector<int> capacity(p, assign.cluster_size());
  std::vector<int> load(p, 0);
  int best = k + 1;
  std::function<void(int, int)> dfs = [&](int w, int current_max) {
    if (current_max >= best) return;
    if (w == k) {
      best = current_max;
      return;
    }
    const int slow = states[w] == 0;
    for (int c : assign.worker_clusters(w)) {
      if (capacity[c] == 0) continue;
      --capacity[c];
      load[c] += slow;
      dfs(w + 1, std::max(current_max, load[c]));
      load[c] -= slow;
      ++capacity[c];
    }
  };
  dfs(0, 0);
  return best;
}

std::string placement_json(const Placement& placement) {
  nlohmann::json clusters = nlohmann::json::array();
  for (std::size_t c = 0; c < placement.cluster_members.size(); ++c) {
    nlohmann::json members = nlohmann::json::array();
    for (int w : placement.cluster_members[c]) {
      members.push_back({{"worker", w + 1}, {"slot", placement.worker_codeword[w].slot + 1}});
    }
    clusters.push_back({{"cluster", c + 1}, {"members", std::move(members)}});
  }
  nlohmann::json doc = {{"fallback_used", placement.fallback_used}, {"clusters", std::move(clusters)}};
  return doc.dump();
}

}  // namespace gcdc
