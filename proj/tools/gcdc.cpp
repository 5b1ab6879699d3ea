// Copyright 2026 The gcdc Authors
// SPDX-License-Identifier: Apache-2.0
//
// gcdc: run gradient-coding straggler experiments, summarize their records
// and sweep the library invariants.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <omp.h>

#include "CLI11.hpp"
#include "json.hpp"

#include "gcdc/config.hpp"
#include "gcdc/io.hpp"
#include "gcdc/placement.hpp"
#include "gcdc/rng.hpp"
#include "gcdc/simulator.hpp"
#include "gcdc/summary.hpp"
#include "gcdc/trainer.hpp"
#include "gcdc/verify.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr int kExitParse = 2;
constexpr int kExitInvariant = 3;

struct RunOptions {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir = ".";
  int seeds = 0;
  int parallel = 0;
  bool dump_placements = false;
  bool dump_assignment = false;
};

void print_summary(const gcdc::Summary& summary, std::ostream& os) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-7s %12s %12s %12s %10s\n", "scheme", "mean", "median", "p95", "records");
  os << buf;
  for (gcdc::Scheme s : gcdc::kAllSchemes) {
    auto it = summary.stats.find(s);
    if (it == summary.stats.end()) continue;
    std::snprintf(buf, sizeof buf, "%-7s %12.5f %12.5f %12.5f %10zu\n", std::string(gcdc::scheme_name(s)).c_str(),
                  it->second.mean, it->second.median, it->second.p95, it->second.n_records);
    os << buf;
  }
  for (const auto& imp : summary.improvements) {
    std::snprintf(buf, sizeof buf, "improvement %-16s %7.2f%%\n", imp.key().c_str(), 100.0 * imp.fraction);
    os << buf;
  }
}

gcdc::ExperimentConfig load_run_config(const RunOptions& opt) {
  if (std::filesystem::path(opt.config_path).extension() == ".json") {
    nlohmann::json manifest;
    try {
      manifest = nlohmann::json::parse(gcdc::read_file(opt.config_path));
    } catch (const std::exception& e) {
      throw gcdc::ConfigParseError(std::string("manifest: ") + e.what(), 0, "manifest");
    }
    if (!manifest.contains("config") || !manifest["config"].is_string()) {
      throw gcdc::ConfigParseError("manifest: missing 'config' snapshot", 0, "config");
    }
    return gcdc::parse_config(manifest["config"].get<std::string>(), opt.overrides);
  }
  return gcdc::load_config_file(opt.config_path, opt.overrides);
}

int run_command(const RunOptions& opt) {
  const auto start = std::chrono::steady_clock::now();
  gcdc::ExperimentConfig cfg;
  try {
    cfg = load_run_config(opt);
    if (opt.seeds > 0) cfg.num_seeds = opt.seeds;
  } catch (const gcdc::ConfigParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitParse;
  } catch (const gcdc::Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitParse;
  }
  try {
    cfg.validate();
  } catch (const gcdc::ConfigError& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return kExitInvariant;
  }

  if (opt.parallel > 0) omp_set_num_threads(opt.parallel);
  const auto exec = opt.parallel == 1 ? gcdc::Execution::kSerial : gcdc::Execution::kParallel;

  std::filesystem::create_directories(opt.out_dir);
  auto out_path = [&](const std::string& suffix) {
    return (std::filesystem::path(opt.out_dir) / (cfg.name + suffix)).string();
  };

  const gcdc::ExperimentResult result = gcdc::run_experiment(cfg, exec);
  const gcdc::Summary summary = gcdc::summarize(result.records);

  nlohmann::ordered_json outputs;
  outputs["records"] = out_path("_records.csv");
  outputs["summary"] = out_path("_summary.json");
  gcdc::write_file_atomic(outputs["records"], gcdc::records_csv(result.records));
  gcdc::write_file_atomic(outputs["summary"], gcdc::summary_json(summary));

  if (cfg.trainer.enabled) {
    const auto data = gcdc::generate_synthetic(
        cfg.trainer.n_train, cfg.trainer.n_test, cfg.trainer.dim,
        gcdc::derive_seed(cfg.master_seed, 0, static_cast<std::uint64_t>(gcdc::Stream::kData)), cfg.trainer.noise);
    const auto training = gcdc::train(cfg, data, exec);
    outputs["loss"] = out_path("_loss.csv");
    gcdc::write_file_atomic(outputs["loss"], gcdc::loss_csv(training));
  }

  if (opt.dump_assignment || opt.dump_placements) {
    gcdc::SeedSimulation sim(cfg, 0, true);
    if (opt.dump_assignment) {
      outputs["assignment"] = out_path("_assignment.csv");
      gcdc::write_file_atomic(outputs["assignment"], gcdc::assignment_csv(sim.assignment()));
    }
    if (opt.dump_placements) {
      std::string lines;
      for (int t = 0; t < cfg.iterations; ++t) {
        const auto ctx = sim.next();
        lines += "{\"iteration\":" + std::to_string(ctx.iteration) +
                 ",\"placement\":" + gcdc::placement_json(ctx.dynamic) + "}\n";
      }
      outputs["placements"] = out_path("_placements.jsonl");
      gcdc::write_file_atomic(outputs["placements"], lines);
    }
  }

  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  nlohmann::ordered_json manifest;
  manifest["artifact_version"] = kVersion;
  manifest["master_seed"] = cfg.master_seed;
  manifest["num_seeds"] = cfg.num_seeds;
  manifest["config"] = gcdc::config_to_text(cfg);
  manifest["outputs"] = outputs;
  manifest["wall_clock_seconds"] = seconds;
  gcdc::write_file_atomic(out_path("_manifest.json"), manifest.dump(2) + "\n");

  print_summary(summary, std::cout);
  std::cout << "fallback placements: " << result.fallback_count << "\n"
            << "wrote " << outputs["records"].get<std::string>() << "\n";
  return 0;
}

int summarize_command(const std::string& path, const std::string& out) {
  gcdc::Summary summary;
  try {
    summary = gcdc::summarize(gcdc::parse_records_csv(gcdc::read_file(path)));
  } catch (const gcdc::Error& e) {
    std::cerr << "summarize: " << e.what() << "\n";
    return kExitParse;
  }
  print_summary(summary, std::cout);
  if (!out.empty()) gcdc::write_file_atomic(out, gcdc::summary_json(summary));
  return 0;
}

int verify_command(std::uint64_t seed, int instances) {
  bool ok = true;
  for (const auto& check : gcdc::run_property_checks(seed, instances)) {
    std::cout << (check.passed ? "PASS " : "FAIL ") << check.name << ": " << check.detail << "\n";
    ok = ok && check.passed;
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gradient coding with dynamic clustering: straggler simulation toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "Run an experiment config (or re-run a manifest)");
  run_cmd->add_option("config", run.config_path, "Config file (.toml) or run manifest (.json)")->required();
  run_cmd->add_option("--set", run.overrides, "Override a field, key=value (repeatable)");
  run_cmd->add_option("--out", run.out_dir, "Output directory");
  run_cmd->add_option("--seeds", run.seeds, "Number of seeds (overrides num_seeds)");
  run_cmd->add_option("--parallel", run.parallel, "Worker threads; 1 runs the serial path");
  run_cmd->add_flag("--dump-placements", run.dump_placements, "Write per-iteration GC-DC placements of seed 0");
  run_cmd->add_flag("--dump-assignment", run.dump_assignment, "Write the seed-0 cluster assignment matrix");

  std::string records_path;
  std::string summary_out;
  auto* sum_cmd = app.add_subcommand("summarize", "Summarize a records CSV");
  sum_cmd->add_option("records", records_path, "Records CSV")->required();
  sum_cmd->add_option("--out", summary_out, "Write summary JSON here");

  std::uint64_t verify_seed = 1;
  int verify_instances = 2000;
  auto* verify_cmd = app.add_subcommand("verify", "Run randomized invariant checks");
  verify_cmd->add_option("--seed", verify_seed, "Master seed");
  verify_cmd->add_option("--instances", verify_instances, "Random instances per check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitParse;
  }

  try {
    if (*run_cmd) return run_command(run);
    if (*sum_cmd) return summarize_command(records_path, summary_out);
    if (*verify_cmd) return verify_command(verify_seed, verify_instances);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
