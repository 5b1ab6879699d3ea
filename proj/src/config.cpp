// Copyright 2026 The gcdc Authors
// SPDX-License-Identifier: Apache-2.0

#include "gcdc/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace gcdc {
namespace {

struct Entry {
  std::string raw;
  int line = 0;
};

using Table = std::map<std::string, Entry>;

const std::set<std::string> kKnownKeys = {
    "name", "K", "P", "r", "n", "T", "initial_slow", "initial_slow_ids", "ssi_mode", "schemes",
    "master_seed", "num_seeds", "latency.mu_s", "latency.mu_f", "latency.alpha", "latency.p",
    "trainer.enabled", "trainer.n_train", "trainer.n_test", "trainer.d", "trainer.learning_rate",
    "trainer.noise", "trainer.scheme"};

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

[[noreturn]] void fail(const std::string& key, int line, const std::string& what) {
  std::ostringstream msg;
  if (line > 0) {
    msg << "line " << line << ": ";
  } else {
    msg << "override: ";
  }
  msg << "field '" << key << "': " << what;
  throw ConfigParseError(msg.str(), line, key);
}

void insert(Table& table, const std::string& key, std::string raw, int line, bool allow_replace) {
  if (!kKnownKeys.count(key)) fail(key, line, "unknown field");
  if (raw.empty()) fail(key, line, "missing value");
  if (!allow_replace && table.count(key)) fail(key, line, "duplicate field");
  table[key] = Entry{std::move(raw), line};
}

Table parse_table(std::string_view text) {
  Table table;
  std::string section;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string body = trim(strip_comment(line));
    if (body.empty()) continue;
    if (body.front() == '[') {
      if (body.back() != ']') fail(body, lineno, "unterminated section header");
      section = trim(std::string_view(body).substr(1, body.size() - 2));
      if (section != "latency" && section != "trainer") fail(section, lineno, "unknown section");
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) fail(body, lineno, "expected 'key = value'");
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    insert(table, section.empty() ? key : section + "." + key, value, lineno, false);
  }
  return table;
}

class Reader {
 public:
  explicit Reader(const Table& table) : table_(table) {}

  bool has(const std::string& key) const { return table_.count(key) > 0; }

  long long integer(const std::string& key, long long fallback) const {
    auto it = table_.find(key);
    if (it == table_.end()) return fallback;
    const std::string& raw = it->second.raw;
    long long v = 0;
    auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), v);
    if (ec != std::errc() || ptr != raw.data() + raw.size()) fail(key, it->second.line, "expected an integer, got '" + raw + "'");
    return v;
  }

  std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) const {
    auto it = table_.find(key);
    if (it == table_.end()) return fallback;
    const std::string& raw = it->second.raw;
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), v);
    if (ec != std::errc() || ptr != raw.data() + raw.size()) fail(key, it->second.line, "expected a non-negative integer, got '" + raw + "'");
    return v;
  }

  double real(const std::string& key, double fallback) const {
    auto it = table_.find(key);
    if (it == table_.end()) return fallback;
    return parse_real(key, it->second.raw, it->second.line);
  }

  bool boolean(const std::string& key, bool fallback) const {
    auto it = table_.find(key);
    if (it == table_.end()) return fallback;
    if (it->second.raw == "true") return true;
    if (it->second.raw == "false") return false;
    fail(key, it->second.line, "expected true or false, got '" + it->second.raw + "'");
  }

  std::string string(const std::string& key, const std::string& fallback) const {
    auto it = table_.find(key);
    if (it == table_.end()) return fallback;
    return unquote(key, it->second.raw, it->second.line);
  }

  std::vector<std::string> list(const std::string& key) const {
    auto it = table_.find(key);
    if (it == table_.end()) return {};
    const std::string& raw = it->second.raw;
    if (raw.size() < 2 || raw.front() != '[' || raw.back() != ']') fail(key, it->second.line, "expected an array");
    std::vector<std::string> items;
    std::string inner = raw.substr(1, raw.size() - 2);
    std::stringstream ss(inner);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (!item.empty()) items.push_back(item);
    }
    return items;
  }

  int line(const std::string& key) const {
    auto it = table_.find(key);
    return it == table_.end() ? 0 : it->second.line;
  }

  static double parse_real(const std::string& key, const std::string& raw, int line) {
    char* end = nullptr;
    const double v = std::strtod(raw.c_str(), &end);
    if (raw.empty() || end != raw.c_str() + raw.size()) fail(key, line, "expected a number, got '" + raw + "'");
    return v;
  }

  static std::string unquote(const std::string& key, const std::string& raw, int line) {
    if (raw.size() >= 2 && raw.front() == '"' && raw.back() == '"') return raw.substr(1, raw.size() - 2);
    if (raw.find_first_of("\"[],= ") != std::string::npos) fail(key, line, "malformed string '" + raw + "'");
    return raw;
  }

 private:
  const Table& table_;
};

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string_view scheme_name(Scheme s) {
  switch (s) {
    case Scheme::kGC: return "GC";
    case Scheme::kGCSC: return "GC-SC";
    case Scheme::kGCDC: return "GC-DC";
    case Scheme::kLB: return "LB";
  }
  return "?";
}

Scheme parse_scheme(std::string_view name) {
  for (Scheme s : kAllSchemes) {
    if (scheme_name(s) == name) return s;
  }
  throw ConfigError("unknown scheme '" + std::string(name) + "'");
}

std::string_view ssi_mode_name(SsiMode m) { return m == SsiMode::kPerfect ? "perfect" : "previous"; }

bool ExperimentConfig::has_scheme(Scheme s) const {
  return std::find(schemes.begin(), schemes.end(), s) != schemes.end();
}

void ExperimentConfig::validate() const {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
  };
  require(num_workers >= 1 && num_clusters >= 1, "K and P must be positive");
  require(num_workers % num_clusters == 0, "P must divide K (K=" + std::to_string(num_workers) +
                                               ", P=" + std::to_string(num_clusters) + ")");
  require(load >= 1 && load <= cluster_size(),
          "need 1 <= r <= l = K/P (r=" + std::to_string(load) + ", l=" + std::to_string(cluster_size()) + ")");
  require(num_blocks >= 1 && num_blocks <= num_clusters,
          "need 1 <= n <= P (n=" + std::to_string(num_blocks) + ", P=" + std::to_string(num_clusters) + ")");
  require(iterations >= 1, "T must be positive");
  require(num_seeds >= 1, "num_seeds must be positive");
  require(initial_slow_count >= 0 && initial_slow_count <= num_workers, "initial_slow must lie in [0, K]");
  for (int id : initial_slow_ids) require(id >= 0 && id < num_workers, "initial_slow_ids must lie in [1, K]");
  latency.validate();
  require(!schemes.empty(), "schemes must not be empty");
  for (std::size_t i = 0; i < schemes.size(); ++i) {
    for (std::size_t j = i + 1; j < schemes.size(); ++j) require(schemes[i] != schemes[j], "duplicate scheme");
  }
  if (trainer.enabled) {
    require(trainer.n_train >= num_workers, "trainer.n_train must be at least K");
    require(trainer.n_test >= 1 && trainer.dim >= 1, "trainer sizes must be positive");
    require(trainer.learning_rate >= 0.0, "trainer.learning_rate must be non-negative");
    require(trainer.noise >= 0.0, "trainer.noise must be non-negative");
    require(trainer.scheme != Scheme::kLB, "trainer.scheme cannot be LB (no code to decode)");
  }
}

ExperimentConfig parse_config(std::string_view text, const std::vector<std::string>& overrides) {
  Table table = parse_table(text);
  for (const auto& item : overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) fail(item, 0, "override must look like key=value");
    insert(table, trim(std::string_view(item).substr(0, eq)), trim(std::string_view(item).substr(eq + 1)), 0, true);
  }

  Reader in(table);
  ExperimentConfig cfg;
  cfg.name = in.string("name", cfg.name);
  cfg.num_workers = static_cast<int>(in.integer("K", cfg.num_workers));
  cfg.num_clusters = static_cast<int>(in.integer("P", cfg.num_clusters));
  cfg.load = static_cast<int>(in.integer("r", cfg.load));
  cfg.num_blocks = static_cast<int>(in.integer("n", cfg.num_blocks));
  cfg.iterations = static_cast<int>(in.integer("T", cfg.iterations));
  cfg.initial_slow_count = static_cast<int>(in.integer("initial_slow", cfg.initial_slow_count));
  for (const auto& item : in.list("initial_slow_ids")) {
    int id = 0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), id);
    if (ec != std::errc() || ptr != item.data() + item.size()) {
      fail("initial_slow_ids", in.line("initial_slow_ids"), "expected integer worker ids");
    }
    cfg.initial_slow_ids.push_back(id - 1);
  }
  const std::string ssi = in.string("ssi_mode", "previous");
  if (ssi == "previous") {
    cfg.ssi_mode = SsiMode::kPrevious;
  } else if (ssi == "perfect") {
    cfg.ssi_mode = SsiMode::kPerfect;
  } else {
    fail("ssi_mode", in.line("ssi_mode"), "expected previous or perfect, got '" + ssi + "'");
  }
  if (in.has("schemes")) {
    cfg.schemes.clear();
    for (const auto& item : in.list("schemes")) {
      const std::string name = Reader::unquote("schemes", item, in.line("schemes"));
      try {
        cfg.schemes.push_back(parse_scheme(name));
      } catch (const ConfigError& e) {
        fail("schemes", in.line("schemes"), e.what());
      }
    }
  }
  cfg.master_seed = in.unsigned_integer("master_seed", cfg.master_seed);
  cfg.num_seeds = static_cast<int>(in.integer("num_seeds", cfg.num_seeds));

  cfg.latency.mu_slow = in.real("latency.mu_s", cfg.latency.mu_slow);
  cfg.latency.mu_fast = in.real("latency.mu_f", cfg.latency.mu_fast);
  cfg.latency.alpha = in.real("latency.alpha", cfg.latency.alpha);
  cfg.latency.switch_prob = in.real("latency.p", cfg.latency.switch_prob);

  cfg.trainer.enabled = in.boolean("trainer.enabled", cfg.trainer.enabled);
  cfg.trainer.n_train = static_cast<int>(in.integer("trainer.n_train", cfg.trainer.n_train));
  cfg.trainer.n_test = static_cast<int>(in.integer("trainer.n_test", cfg.trainer.n_test));
  cfg.trainer.dim = static_cast<int>(in.integer("trainer.d", cfg.trainer.dim));
  cfg.trainer.learning_rate = in.real("trainer.learning_rate", cfg.trainer.learning_rate);
  cfg.trainer.noise = in.real("trainer.noise", cfg.trainer.noise);
  if (in.has("trainer.scheme")) {
    try {
      cfg.trainer.scheme = parse_scheme(in.string("trainer.scheme", ""));
    } catch (const ConfigError& e) {
      fail("trainer.scheme", in.line("trainer.scheme"), e.what());
    }
  }
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigParseError("cannot open config file '" + path + "'", 0, "path");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), overrides);
}

std::string config_to_text(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "name = \"" << cfg.name << "\"\n"
      << "K = " << cfg.num_workers << "\n"
      << "P = " << cfg.num_clusters << "\n"
      << "r = " << cfg.load << "\n"
      << "n = " << cfg.num_blocks << "\n"
      << "T = " << cfg.iterations << "\n"
      << "initial_slow = " << cfg.initial_slow_count << "\n";
  if (!cfg.initial_slow_ids.empty()) {
    out << "initial_slow_ids = [";
    for (std::size_t i = 0; i < cfg.initial_slow_ids.size(); ++i) out << (i ? ", " : "") << cfg.initial_slow_ids[i] + 1;
    out << "]\n";
  }
  out << "ssi_mode = \"" << ssi_mode_name(cfg.ssi_mode) << "\"\n"
      << "schemes = [";
  for (std::size_t i = 0; i < cfg.schemes.size(); ++i) out << (i ? ", " : "") << '"' << scheme_name(cfg.schemes[i]) << '"';
  out << "]\n"
      << "master_seed = " << cfg.master_seed << "\n"
      << "num_seeds = " << cfg.num_seeds << "\n\n"
      << "[latency]\n"
      << "mu_s = " << format_double(cfg.latency.mu_slow) << "\n"
      << "mu_f = " << format_double(cfg.latency.mu_fast) << "\n"
      << "alpha = " << format_double(cfg.latency.alpha) << "\n"
      << "p = " << format_double(cfg.latency.switch_prob) << "\n\n"
      << "[trainer]\n"
      << "enabled = " << (cfg.trainer.enabled ? "true" : "false") << "\n"
      << "n_train = " << cfg.trainer.n_train << "\n"
      << "n_test = " << cfg.trainer.n_test << "\n"
      << "d = " << cfg.trainer.dim << "\n"
      << "learning_rate = " << format_double(cfg.trainer.learning_rate) << "\n"
      << "noise = " << format_double(cfg.trainer.noise) << "\n"
      << "scheme = \"" << scheme_name(cfg.trainer.scheme) << "\"\n";
  return out.str();
}

}  // namespace gcdc
