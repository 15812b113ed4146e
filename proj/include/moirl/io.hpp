#pragma once

#include <optional>
#include <string>
#include <vector>

#include "moirl/experiments.hpp"
#include "moirl/irl.hpp"
#include "moirl/types.hpp"

namespace moirl {

// Exit-code taxonomy for the CLI: IoError -> 1, ConfigError -> 2,
// numeric failures (std::runtime_error from the solvers) -> 3.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// 17-significant-digit decimal formatting; round-trips any double.
std::string format_double(double v);

/// Write-temp-then-rename; throws IoError on failure.
void atomic_write(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

// ---------------------------------------------------------------------------
// Environment / preset files (JSON).
// Required keys: goal, start_position, start_velocity, dt, horizon_T,
// obstacles ({center, radius, margin}), weights (map keyed on feature names).
// Optional: name, goal_tolerance, alternative_starts.
// ---------------------------------------------------------------------------

ExperimentPreset load_environment(const std::string& path);
void save_environment(const ExperimentPreset& preset, const std::string& path);

// ---------------------------------------------------------------------------
// CSV formats. Headers are stable schemas; doubles carry 17 significant
// digits so files round-trip exactly.
// ---------------------------------------------------------------------------

// "# dt <value>" line, then t,px,py,vx,vy,ux,uy; the final row has empty
// control fields.
void save_trajectory_csv(const Trajectory& tau, const std::string& path);
Trajectory load_trajectory_csv(const std::string& path);

// feature,weight rows in environment layout order.
void save_weights_csv(const WeightVector& w, const std::vector<std::string>& names,
                      const std::string& path);
WeightVector load_weights_csv(const std::string& path,
                              const std::vector<std::string>& expected_names);

extern const char* const kMetricsCsvHeader;
void save_metrics_csv(const std::vector<IterationRecord>& log, const std::string& path);

// All sampled trajectories, prefixed by a sample index column.
void save_samples_csv(const std::vector<Trajectory>& samples, const std::string& path);

// ---------------------------------------------------------------------------
// JSON reports and run manifests.
// ---------------------------------------------------------------------------

std::string report_to_json(const EvaluationReport& report, const std::string& env_file,
                           const std::string& weights_file);
std::string format_report_table(const EvaluationReport& report);

struct RunManifest {
  std::string tool_version;
  std::string command;
  std::string preset_name;
  std::string started_at;   // ISO-8601 UTC
  std::string finished_at;
  std::string termination_reason;
  int outer_iterations = 0;
  std::vector<std::pair<std::string, std::string>> config;   // ordered snapshot
  std::vector<std::pair<std::string, std::string>> outputs;  // name -> path
};
void save_manifest(const RunManifest& manifest, const std::string& path);

std::string current_timestamp_utc();

extern const char* const kToolVersion;

}  // namespace moirl
