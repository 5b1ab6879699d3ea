// Copyright 2026 The gcdc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "gcdc/errors.hpp"
#include "gcdc/simulator.hpp"

namespace gcdc {

inline constexpr std::string_view kRecordsHeader =
    "seed,iteration,scheme,completion_time,straggler_count,max_spread,recovery_flag,fallback_used";

class SchemaError : public Error {
 public:
  using Error::Error;
};

std::string records_csv(const std::vector<IterationRecord>& records);

// Parses the records schema; spread is reduced to {max_spread}. Throws
// SchemaError with line diagnostics.
std::vector<IterationRecord> parse_records_csv(std::string_view text);

std::string read_file(const std::string& path);
// Writes to a temporary sibling and renames over the destination.
void write_file_atomic(const std::string& path, std::string_view content);

}  // namespace gcdc
