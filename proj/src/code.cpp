// Copyright 2026 The gcdc Authors
// SPDX-License-Identifier: Apache-2.0

#include "gcdc/code.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <string>

#include "detail/combinations.hpp"
#include "gcdc/errors.hpp"
#include "gcdc/rng.hpp"

namespace gcdc {
namespace {

constexpr int kMaxConstructionAttempts = 32;
// Beyond this many threshold-size subsets verification samples instead of
// enumerating.
constexpr std::uint64_t kExhaustiveSubsetLimit = 200000;
constexpr double kMinCoefficientMagnitude = 1e-6;

Eigen::MatrixXd stacked_transpose(const ClusterCode& code, std::span<const int> slots) {
  Eigen::MatrixXd bt(code.size(), static_cast<Eigen::Index>(slots.size()));
  for (std::size_t j = 0; j < slots.size(); ++j) bt.col(j) = code.encoding_row(slots[j]).transpose();
  return bt;
}

std::vector<int> checked_slots(const ClusterCode& code, std::span<const int> received) {
  std::vector<int> slots(received.begin(), received.end());
  std::sort(slots.begin(), slots.end());
  if (std::adjacent_find(slots.begin(), slots.end()) != slots.end()) {
    throw ConfigError("solve_decoding: duplicate slot in received set");
  }
  for (int s : slots) {
    if (s < 0 || s >= code.size()) throw ConfigError("solve_decoding: slot out of range");
  }
  return slots;
}

// Draws a random s x size parity matrix H with H * 1 = 0 and chooses each
// cyclic-support row b_i in ker(H) with b_i[i] = 1. All rows then live in the
// (size - s)-dimensional kernel, which contains the all-ones vector, so any
// size - s generic rows span it.
std::vector<CodewordSpec> draw_codewords(int size, int load, int offset, int cluster,
                                         std::uint64_t seed, bool& ok) {
  const int s = load - 1;
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  Eigen::MatrixXd h(s, size);
  for (int i = 0; i < s; ++i) {
    double sum = 0.0;
    for (int j = 0; j + 1 < size; ++j) {
      h(i, j) = normal(rng);
      sum += h(i, j);
    }
    h(i, size - 1) = -sum;
  }

  ok = true;
  std::vector<CodewordSpec> out(size);
  for (int i = 0; i < size; ++i) {
    CodewordSpec& cw = out[i];
    cw.cluster = cluster;
    cw.slot = i;
    std::vector<int> local(load);
    for (int j = 0; j < load; ++j) local[j] = (i + j) % size;

    std::vector<double> coeffs(load, 1.0);
    if (s > 0) {
      Eigen::MatrixXd sub(s, s);
      for (int j = 0; j < s; ++j) sub.col(j) = h.col(local[j + 1]);
      Eigen::FullPivLU<Eigen::MatrixXd> lu(sub);
      if (!lu.isInvertible()) {
        ok = false;
        return out;
      }
      Eigen::VectorXd x = lu.solve(-h.col(local[0]));
      for (int j = 0; j < s; ++j) coeffs[j + 1] = x(j);
    }
    for (double c : coeffs) {
      if (!std::isfinite(c) || std::abs(c) < kMinCoefficientMagnitude) ok = false;
    }
    cw.coeffs = std::move(coeffs);
    cw.support.reserve(load);
    for (int b : local) cw.support.push_back(offset + b);
  }
  return out;
}

bool verify_subset(const ClusterCode& code, std::span<const int> subset) {
  const Eigen::MatrixXd bt = stacked_transpose(code, subset);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(bt);
  const auto& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  if (!(smin > 0.0) || sv(0) / smin >= kConditionBound) return false;
  try {
    solve_decoding(code, subset);
  } catch (const DecodeFailure&) {
    return false;
  }
  return true;
}

bool verify_code(const ClusterCode& code, std::uint64_t seed) {
  const int n = code.size();
  const int k = code.threshold();
  const std::uint64_t total = detail::binomial(n, k);
  bool good = true;
  if (total <= kExhaustiveSubsetLimit) {
    detail::for_each_combination(n, k, [&](std::span<const int> subset) {
      good = verify_subset(code, subset);
      return good;
    });
    return good;
  }
  Rng rng(splitmix64(seed));
  std::vector<int> all(n);
  std::iota(all.begin(), all.end(), 0);
  for (std::uint64_t t = 0; t < kExhaustiveSubsetLimit && good; ++t) {
    std::shuffle(all.begin(), all.end(), rng);
    std::vector<int> subset(all.begin(), all.begin() + k);
    good = verify_subset(code, subset);
  }
  return good;
}

}  // namespace

Eigen::RowVectorXd ClusterCode::encoding_row(int slot) const {
  const CodewordSpec& cw = codewords_.at(slot);
  Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(size_);
  for (std::size_t j = 0; j < cw.support.size(); ++j) row(cw.support[j] - batch_offset_) += cw.coeffs[j];
  return row;
}

Eigen::MatrixXd ClusterCode::encoding_matrix() const {
  Eigen::MatrixXd b(size_, size_);
  for (int i = 0; i < size_; ++i) b.row(i) = encoding_row(i);
  return b;
}

bool operator==(const ClusterCode& a, const ClusterCode& b) {
  if (a.size_ != b.size_ || a.load_ != b.load_ || a.batch_offset_ != b.batch_offset_ ||
      a.cluster_ != b.cluster_ || a.seed_ != b.seed_ || a.codewords_.size() != b.codewords_.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.codewords_.size(); ++i) {
    const auto& x = a.codewords_[i];
    const auto& y = b.codewords_[i];
    if (x.cluster != y.cluster || x.slot != y.slot || x.support != y.support || x.coeffs != y.coeffs) {
      return false;
    }
  }
  return true;
}

ClusterCode build_cluster_code(int size, int load, std::uint64_t seed, int batch_offset,
                               int cluster) {
  if (load < 1 || load > size) {
    throw ConfigError("build_cluster_code: need 1 <= r <= l (got l=" + std::to_string(size) +
                      ", r=" + std::to_string(load) + ")");
  }
  for (int attempt = 0; attempt < kMaxConstructionAttempts; ++attempt) {
    const std::uint64_t candidate = attempt == 0 ? seed : derive_seed(seed, attempt);
    bool ok = false;
    ClusterCode code;
    code.size_ = size;
    code.load_ = load;
    code.batch_offset_ = batch_offset;
    code.cluster_ = cluster;
    code.seed_ = candidate;
    code.codewords_ = draw_codewords(size, load, batch_offset, cluster, candidate, ok);
    if (ok && verify_code(code, candidate)) return code;
  }
  std::ostringstream msg;
  msg << "build_cluster_code: no verified code for l=" << size << ", r=" << load << " after "
      << kMaxConstructionAttempts << " attempts";
  throw CodeConstructionError(msg.str());
}

std::vector<ClusterCode> build_cluster_codes(int num_clusters, int size, int load,
                                             std::uint64_t seed) {
  std::vector<ClusterCode> codes;
  codes.reserve(num_clusters);
  for (int p = 0; p < num_clusters; ++p) {
    codes.push_back(build_cluster_code(size, load, derive_seed(seed, p), p * size, p));
  }
  return codes;
}

DecodingSolution solve_decoding(const ClusterCode& code, std::span<const int> received) {
  std::vector<int> slots = checked_slots(code, received);
  if (static_cast<int>(slots.size()) < code.threshold()) {
    throw NotEnoughResults("solve_decoding: cluster " + std::to_string(code.cluster()) +
                           " received " + std::to_string(slots.size()) + " codewords, needs " +
                           std::to_string(code.threshold()));
  }
  const Eigen::MatrixXd bt = stacked_transpose(code, slots);
  const Eigen::VectorXd target = Eigen::VectorXd::Constant(code.size(), 1.0 / code.size());
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(bt);
  const Eigen::VectorXd a = cod.solve(target);
  const double residual = (bt * a - target).lpNorm<Eigen::Infinity>();
  if (!(residual < kDecodeResidualTol)) {
    std::ostringstream msg;
    msg << "solve_decoding: residual " << residual << " exceeds tolerance for cluster "
        << code.cluster();
    throw DecodeFailure(msg.str());
  }
  DecodingSolution out;
  out.slots = std::move(slots);
  out.weights.assign(a.data(), a.data() + a.size());
  out.residual = residual;
  return out;
}

double decoding_condition(const ClusterCode& code, std::span<const int> received) {
  std::vector<int> slots = checked_slots(code, received);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(stacked_transpose(code, slots));
  const auto& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  return smin > 0.0 ? sv(0) / smin : std::numeric_limits<double>::infinity();
}

GradientVector encode(const ClusterCode& code, int slot, std::span<const GradientVector> partials) {
  const CodewordSpec& cw = code.codeword(slot);
  if (partials.size() != cw.support.size()) {
    throw ShapeError("encode: expected " + std::to_string(cw.support.size()) +
                     " partial gradients, got " + std::to_string(partials.size()));
  }
  const Eigen::Index dim = partials.front().size();
  GradientVector out = GradientVector::Zero(dim);
  for (std::size_t j = 0; j < partials.size(); ++j) {
    if (partials[j].size() != dim) throw ShapeError("encode: partial gradient dimension mismatch");
    out.noalias() += cw.coeffs[j] * partials[j];
  }
  return out;
}

GradientVector decode_cluster(const ClusterCode& code, const ReceivedCodewords& received) {
  std::vector<int> slots;
  slots.reserve(received.size());
  for (const auto& [slot, _] : received) slots.push_back(slot);
  const DecodingSolution sol = solve_decoding(code, slots);

  const Eigen::Index dim = received.begin()->second.size();
  GradientVector out = GradientVector::Zero(dim);
  for (std::size_t j = 0; j < sol.slots.size(); ++j) {
    const GradientVector& c = received.at(sol.slots[j]);
    if (c.size() != dim) throw ShapeError("decode: codeword dimension mismatch");
    out.noalias() += sol.weights[j] * c;
  }
  return out;
}

GradientVector decode_full_gradient(std::span<const ClusterCode> codes,
                                    std::span<const ReceivedCodewords> received) {
  if (codes.size() != received.size() || codes.empty()) {
    throw ShapeError("decode_full_gradient: need one received map per cluster");
  }
  std::vector<int> deficient;
  for (std::size_t p = 0; p < codes.size(); ++p) {
    if (static_cast<int>(received[p].size()) < codes[p].threshold()) deficient.push_back(static_cast<int>(p));
  }
  if (!deficient.empty()) {
    std::ostringstream msg;
    msg << "decode_full_gradient: not decodable, deficient cluster(s):";
    for (int p : deficient) msg << ' ' << p;
    throw NotDecodable(msg.str(), std::move(deficient));
  }

  GradientVector total;
  for (std::size_t p = 0; p < codes.size(); ++p) {
    GradientVector avg = decode_cluster(codes[p], received[p]);
    if (p == 0) {
      total = std::move(avg);
    } else {
      if (avg.size() != total.size()) throw ShapeError("decode_full_gradient: dimension mismatch");
      total += avg;
    }
  }
  return total / static_cast<double>(codes.size());
}

}  // namespace gcdc
