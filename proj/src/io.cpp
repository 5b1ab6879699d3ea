// Copyright 2026 The gcdc Authors
// SPDX-License-Identifier: Apache-2.0

#include "gcdc/io.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace gcdc {
namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

template <typename T>
T parse_number(const std::string& cell, int line, const char* column) {
  T v{};
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size()) {
    throw SchemaError("records line " + std::to_string(line) + ": column '" + column +
                      "' is not a number: '" + cell + "'");
  }
  return v;
}

}  // namespace

std::string records_csv(const std::vector<IterationRecord>& records) {
  std::string out(kRecordsHeader);
  out += '\n';
  char buf[160];
  for (const auto& rec : records) {
    std::snprintf(buf, sizeof buf, "%d,%d,%s,%.17g,%d,%d,%d,%d\n", rec.seed, rec.iteration,
                  std::string(scheme_name(rec.scheme)).c_str(), rec.completion_time, rec.straggler_count,
                  rec.max_spread(), rec.recovery_flag ? 1 : 0, rec.fallback_used ? 1 : 0);
    out += buf;
  }
  return out;
}

std::vector<IterationRecord> parse_records_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) throw SchemaError("records: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kRecordsHeader) {
    throw SchemaError("records line 1: header mismatch, expected '" + std::string(kRecordsHeader) +
                      "', got '" + line + "'");
  }
  std::vector<IterationRecord> out;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != 8) {
      throw SchemaError("records line " + std::to_string(lineno) + ": expected 8 columns, got " +
                        std::to_string(cells.size()));
    }
    IterationRecord rec;
    rec.seed = parse_number<int>(cells[0], lineno, "seed");
    rec.iteration = parse_number<int>(cells[1], lineno, "iteration");
    try {
      rec.scheme = parse_scheme(cells[2]);
    } catch (const ConfigError&) {
      throw SchemaError("records line " + std::to_string(lineno) + ": unknown scheme '" + cells[2] + "'");
    }
    rec.completion_time = parse_number<double>(cells[3], lineno, "completion_time");
    rec.straggler_count = parse_number<int>(cells[4], lineno, "straggler_count");
    rec.spread = {parse_number<int>(cells[5], lineno, "max_spread")};
    rec.recovery_flag = parse_number<int>(cells[6], lineno, "recovery_flag") != 0;
    rec.fallback_used = parse_number<int>(cells[7], lineno, "fallback_used") != 0;
    out.push_back(std::move(rec));
  }
  if (out.empty()) throw SchemaError("records: no data rows");
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file_atomic(const std::string& path, std::string_view content) {
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + tmp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error("short write to '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, target);
}

}  // namespace gcdc
