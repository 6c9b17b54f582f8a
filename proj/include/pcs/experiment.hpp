#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pcs/expander_decomp.hpp"
#include "pcs/generators.hpp"

namespace pcs {

struct StreamSpec {
  /// Feed the sparsifier pool from a generated stream instead of sampling offline.
  bool enabled = false;
  double churn = 0.0;
};

struct ExperimentConfig {
  std::string name = "experiment";
  std::uint64_t seed = 1;
  int trials = 1;
  GraphSpec graph;
  StreamSpec stream;
  DecompParams decomp;
  std::string csv_path;
  std::string json_path;
  /// Adds a wall-clock column; off by default so reruns are byte-identical.
  bool record_timing = false;
  /// Worker threads; 0 means the PCS_THREADS variable or the core count.
  int threads = 0;
};

std::string config_to_json(const ExperimentConfig& config);
/// Missing keys keep their defaults; unknown keys are rejected.
ExperimentConfig config_from_json(const std::string& text);
ExperimentConfig load_config(const std::string& path);

struct TrialOutcome {
  int trial = 0;
  std::uint64_t seed = 0;
  /// "ok", "verify-fail", "sketch-fail" or "error".
  std::string status;
  std::string error;
  int n = 0;
  DecompResult result;
  double wall_ms = 0.0;
};

struct ExperimentResult {
  std::vector<TrialOutcome> trials;
  std::string csv;
  std::string json;
  int verify_failures = 0;
  int sketch_failures = 0;
  int errors = 0;
};

/// Runs every trial (in parallel, merged in trial order), renders the CSV and
/// JSON summary, and writes them to the configured paths when set.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Worker count: config value, else PCS_THREADS, else hardware concurrency.
int worker_count(int configured);

}  // namespace pcs
