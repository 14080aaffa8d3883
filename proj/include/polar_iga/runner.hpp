#pragma once

#include <iosfwd>
#include <string>

#include "polar_iga/config.hpp"

namespace polar_iga {

/// Runs the configured convergence study and writes the requested artifacts
/// (report CSV/JSON, per-level mesh CSVs, a sampled solution grid and a plot
/// script stub) into output_dir. Prints a rate summary table to `log`.
/// Throws ConfigError for invalid input and std::runtime_error on numerical
/// failure.
void run_experiment(const RunConfig& config, std::ostream& log);

/// Writes the patch JSON of a named problem geometry.
void export_geometry(const std::string& problem, const std::string& path);

/// Mesh diagnostics for every level of the config: quasi-uniformity ratios,
/// the corner/ring split and (optionally) mesh CSV files.
void mesh_info(const RunConfig& config, std::ostream& log);

}  // namespace polar_iga
