#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "polar_iga/analysis.hpp"

namespace polar_iga {

/// Invalid configuration input (maps to exit code 2 in the CLI).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EmitFlags {
  bool mesh_csv = false;
  bool report_csv = true;
  bool report_json = true;
  bool solution_samples = false;
};

struct RunConfig {
  std::string problem;  // pacman | lshape
  int degree = 2;
  GradingMode grading = GradingMode::automatic;
  double grading_value = 0.0;  // only for explicit grading
  std::vector<int> levels;
  int quadrature_nodes = 6;
  std::string output_dir = ".";
  EmitFlags emit;
};

/// Parses and validates a config. JSON is canonical; a flat TOML subset
/// (key = value pairs, an optional [emit] table, integer arrays) is accepted
/// as well. The format is detected from the file extension.
RunConfig load_run_config(const std::string& path);
RunConfig parse_config_json(const std::string& text);
RunConfig parse_config_toml(const std::string& text);

ManufacturedProblem problem_by_name(const std::string& name);

}  // namespace polar_iga
