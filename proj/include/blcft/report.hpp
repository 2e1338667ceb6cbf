#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "blcft/config.hpp"

namespace blcft {

// ---------------------------------------------------------------------------
// Run reports: one JSON object per run plus optional CSV artifacts.
// Serialization is deterministic (fixed key order, shortest round-trip
// numbers), so identical (config, seed, workers) produce byte-identical
// reports apart from the wall-time field.
// ---------------------------------------------------------------------------

struct Metric {
  std::string name;
  double value = 0.0;
  double stderr_ = 0.0;
  double tolerance = 0.0;
  bool has_pass = false;
  bool pass = false;
};

struct ReportRecord {
  int schema_version = 1;
  std::string command;
  std::string config_hash;  // hex digest of the canonical config
  std::uint64_t seed = 0;
  int workers = 1;
  std::string build;        // git describe of the build tree
  std::vector<Metric> metrics;
  std::string note;         // e.g. the violated bound of a failed gate
  double wall_time_s = 0.0;

  bool all_pass() const;
  // include_timing=false drops the wall-time field (comparison form).
  std::string to_json(bool include_timing = true) const;
};

Metric make_metric(const std::string& name, double value);
Metric make_checked(const std::string& name, double value, double tolerance,
                    bool pass, double stderr_ = 0.0);

struct RunOutcome {
  ReportRecord report;
  // artifact file name -> contents (CSV tables); callers decide where to
  // write them, so concurrent runs on distinct paths never interfere.
  std::vector<std::pair<std::string, std::string>> artifacts;
  int exit_code = 0;  // 0 all pass, 2 divergence / gate failure
};

// Dispatches the config's command to the corresponding module operation.
// Module errors propagate as exceptions with command context.
RunOutcome run_experiment(const ExperimentConfig& cfg);

}  // namespace blcft
