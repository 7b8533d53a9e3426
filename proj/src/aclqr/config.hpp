#pragma once

// Experiment files. YAML, validated against the schema documented in
// docs/config.md: unknown keys are rejected and every error names the line.

#include <string>
#include <vector>

#include "aclqr/sim.hpp"

namespace aclqr {

struct ExperimentConfig {
  SimConfig sim;
  std::string stem = "run";
  int plot_stride = 10;

  std::string source_name;
  std::string source_text;
  /// Hex SHA-256 of source_text.
  std::string sha256;
  /// "key = value" entries whose values are artifact choices rather than
  /// values from the reference experiment.
  std::vector<std::string> non_paper_defaults;

  bool linear_plant() const { return sim.plant != PlantKind::kQuadrotorNonlinear; }
};

/// Throws Error(kConfig) with "source:line:col: message" on any problem.
ExperimentConfig parse_experiment(const std::string& text, const std::string& source_name);

/// Throws Error(kIo) if unreadable, Error(kConfig) if invalid.
ExperimentConfig load_experiment(const std::string& path);

/// Names accepted by preset_text().
std::vector<std::string> preset_names();

/// Built-in experiment definitions (the two wind scenarios on either plant).
/// Throws Error(kInvalidArgument) for unknown names.
std::string preset_text(const std::string& name);

std::string sha256_hex(const std::string& bytes);

}  // namespace aclqr
