#pragma once

#include <cstdint>
#include <string>

#include "blcft/lcft.hpp"

namespace blcft {

// ---------------------------------------------------------------------------
// Experiment configuration: flat key-value text with one [section] per
// module.  Unknown keys are rejected; every numeric field is validated
// against the module preconditions at parse time.  The canonical serialized
// form (fixed key order, shortest round-trip numbers) defines the config
// hash, so parse -> serialize -> parse is hash-stable.
// ---------------------------------------------------------------------------

struct ExperimentConfig {
  int schema_version = 1;
  std::string command;

  // [surface]
  std::string surface_name = "flat_cylinder";
  double modulus = 1.0;
  double window_radius = 4.0;

  // [liouville]
  LiouvilleParams params;

  // [insertions]  (repeatable `bulk u v alpha` / `boundary u v beta` lines)
  InsertionSet insertions;

  // [mc]
  McConfig mc;

  // [ladder]
  double ladder_eps0 = 0.125;
  int ladder_rungs = 4;

  // [spectral]
  int n_eigen = 2000;

  // [markov]
  double markov_cut = 0.5;
  int markov_grid = 20;

  // [green]
  int green_grid = 1024;

  // [anomaly]
  double phi_amplitude = 0.3;

  // [fusion]
  std::string fusion_kind = "bulk-bulk";
  double fusion_w1 = 0.5;
  double fusion_w2 = 0.5;
  double fusion_eps = 0.01;
  int fusion_rings = 44;
  int fusion_angles = 28;
  double fusion_d0 = 0.4;
  double fusion_ratio = 0.5;
  int fusion_count = 4;
};

// Parses and validates a config document.  Throws std::invalid_argument for
// missing required keys (command, gamma), malformed lines, unknown keys or
// commands, gamma outside (0, 2], or mu = mu_boundary = 0.
ExperimentConfig parse_config(const std::string& text);

ExperimentConfig load_config(const std::string& path);

// Canonical serialized form: fixed section/key order, round-trip numbers.
std::string serialize_config(const ExperimentConfig& c);

// FNV-1a digest of the canonical form.
std::uint64_t config_hash(const ExperimentConfig& c);

// The surface named by the config.
Surface config_surface(const ExperimentConfig& c);

bool known_command(const std::string& command);

}  // namespace blcft
