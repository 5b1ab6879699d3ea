// Copyright 2026 The gcdc Authors
// SPDX-License-Identifier: Apache-2.0
//
// Test-only reference computations. Nothing here calls into the library's
// decoding, placement or scoring paths.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace oracle {

using Row = std::vector<double>;

// Residual norm of the best approximation of (1/l) * 1 by the span of `rows`
// (modified Gram-Schmidt projection).
inline double span_residual(const std::vector<Row>& rows, std::size_t l) {
  std::vector<Row> basis;
  for (const Row& r : rows) {
    Row v = r;
    for (const Row& q : basis) {
      double dot = 0.0;
      for (std::size_t i = 0; i < l; ++i) dot += v[i] * q[i];
      for (std::size_t i = 0; i < l; ++i) v[i] -= dot * q[i];
    }
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (norm < 1e-12) continue;
    for (double& x : v) x /= norm;
    basis.push_back(std::move(v));
  }
  Row target(l, 1.0 / static_cast<double>(l));
  for (const Row& q : basis) {
    double dot = 0.0;
    for (std::size_t i = 0; i < l; ++i) dot += target[i] * q[i];
    for (std::size_t i = 0; i < l; ++i) target[i] -= dot * q[i];
  }
  double res = 0.0;
  for (double x : target) res += x * x;
  return std::sqrt(res);
}

// Least-squares weights a minimising ||sum_k a_k rows[k] - (1/l) 1|| via the
// normal equations and Gaussian elimination with partial pivoting. Requires
// linearly independent rows.
inline std::vector<double> least_squares_weights(const std::vector<Row>& rows, std::size_t l) {
  const std::size_t m = rows.size();
  std::vector<std::vector<double>> a(m, std::vector<double>(m + 1, 0.0));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t t = 0; t < l; ++t) a[i][j] += rows[i][t] * rows[j][t];
    }
    for (std::size_t t = 0; t < l; ++t) a[i][m] += rows[i][t] / static_cast<double>(l);
  }
  for (std::size_t c = 0; c < m; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < m; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    }
    std::swap(a[c], a[piv]);
    for (std::size_t r = 0; r < m; ++r) {
      if (r == c) continue;
      const double f = a[r][c] / a[c][c];
      for (std::size_t j = c; j <= m; ++j) a[r][j] -= f * a[c][j];
    }
  }
  std::vector<double> out(m);
  for (std::size_t i = 0; i < m; ++i) out[i] = a[i][m] / a[i][i];
  return out;
}

// k-th smallest (1-based) by full sort.
inline double kth_smallest(std::vector<double> v, int k) {
  std::sort(v.begin(), v.end());
  return v[static_cast<std::size_t>(k - 1)];
}

// Kolmogorov-Smirnov distance between samples and a CDF.
template <typename Cdf>
double ks_statistic(std::vector<double> samples, Cdf cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max(d, std::max(f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f));
  }
  return d;
}

}  // namespace oracle
