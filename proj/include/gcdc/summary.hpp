// Copyright 2026 The gcdc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <string>
#include <vector>

#include "gcdc/config.hpp"
#include "gcdc/simulator.hpp"

namespace gcdc {

struct SchemeStats {
  double mean = 0.0;
  double median = 0.0;
  double p95 = 0.0;  // nearest-rank
  std::size_t n_records = 0;
};

struct Improvement {
  Scheme better;
  Scheme baseline;
  double fraction = 0.0;  // 1 - mean(better) / mean(baseline)

  std::string key() const;
};

struct Summary {
  std::map<Scheme, SchemeStats> stats;
  // Every pair (A, B) with A before B in LB, GC-DC, GC-SC, GC order.
  std::vector<Improvement> improvements;

  double improvement(Scheme better, Scheme baseline) const;
};

Summary summarize(const std::vector<IterationRecord>& records);

// {"schemes": {name: {mean, median, p95, n_records}}, "improvements": {"A_vs_B": fraction}}
std::string summary_json(const Summary& summary);

}  // namespace gcdc
