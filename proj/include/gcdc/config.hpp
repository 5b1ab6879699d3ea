// Copyright 2026 The gcdc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "gcdc/errors.hpp"
#include "gcdc/straggler.hpp"

namespace gcdc {

enum class Scheme { kGC, kGCSC, kGCDC, kLB };
enum class SsiMode { kPrevious, kPerfect };

std::string_view scheme_name(Scheme s);
Scheme parse_scheme(std::string_view name);
std::string_view ssi_mode_name(SsiMode m);

// Display order: lower bound first, plain GC last.
inline constexpr Scheme kAllSchemes[] = {Scheme::kLB, Scheme::kGCDC, Scheme::kGCSC, Scheme::kGC};

enum class Execution { kSerial, kParallel };

struct TrainerParams {
  bool enabled = false;
  int n_train = 2000;
  int n_test = 400;
  int dim = 1000;
  double learning_rate = 0.1;
  double noise = 1.0;
  Scheme scheme = Scheme::kGCDC;
};

struct ExperimentConfig {
  std::string name = "experiment";
  int num_workers = 12;   // K
  int num_clusters = 4;   // P
  int load = 2;           // r
  int num_blocks = 2;     // n
  int iterations = 400;   // T
  LatencyParams latency;
  int initial_slow_count = 6;
  std::vector<int> initial_slow_ids;  // 0-based; overrides the count when set
  SsiMode ssi_mode = SsiMode::kPrevious;
  std::vector<Scheme> schemes{std::begin(kAllSchemes), std::end(kAllSchemes)};
  std::uint64_t master_seed = 2020;
  int num_seeds = 20;
  TrainerParams trainer;

  int cluster_size() const { return num_workers / num_clusters; }
  bool has_scheme(Scheme s) const;
  // Throws ConfigError naming the violated constraint.
  void validate() const;
};

// Malformed config text or override: carries the line (0 for overrides) and
// the offending field.
class ConfigParseError : public Error {
 public:
  ConfigParseError(const std::string& what, int line, std::string field)
      : Error(what), line_(line), field_(std::move(field)) {}
  int line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  int line_;
  std::string field_;
};

// Table-style key/value text: `key = value` lines, `[latency]` and
// `[trainer]` sections, `#` comments, strings in double quotes, arrays in
// brackets. Overrides are `key=value` or `section.key=value`.
ExperimentConfig parse_config(std::string_view text, const std::vector<std::string>& overrides = {});
ExperimentConfig load_config_file(const std::string& path, const std::vector<std::string>& overrides = {});

std::string config_to_text(const ExperimentConfig& cfg);

}  // namespace gcdc
