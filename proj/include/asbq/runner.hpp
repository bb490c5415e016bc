#pragma once

#include <optional>
#include <string>
#include <vector>

#include "asbq/config.hpp"
#include "asbq/diagnostics.hpp"
#include "asbq/integrator.hpp"
#include "asbq/singularity.hpp"

namespace asbq {

enum class RunStatus { completed, stopped_by_policy, integration_fault };

const char* to_string(RunStatus s);

/// Process exit code of a run: 0, 4 (stopped by policy) or 3 (fault).
int exit_code(RunStatus s);

struct RunReport {
  RunStatus status = RunStatus::completed;
  std::optional<StopDecision> stop;
  std::vector<Event> events;
  std::size_t steps_taken = 0;
  double t_final = 0.0;
  double wall_seconds = 0.0;
  std::size_t resolution_warnings = 0;
  double max_tail_ratio = 0.0;
  std::vector<std::string> warnings;
  std::vector<std::string> files;
  std::string fault;

  std::vector<NormRecord> norms;
  std::vector<SingularityFit> fits;
  /// Final state (or the last good state after a fault).
  std::optional<WaveState> final_state;
};

/// Builds the initial state of a config (profiles, humps or a snapshot file).
/// Throws ConfigError for data that contradict the grid or model.
WaveState build_initial_state(const ExperimentConfig& c);

struct RunOptions {
  /// Skip all file output; the report still carries series and final state.
  bool write_files = true;
};

/// Runs the experiment. Writes into c.output.directory: config.json,
/// norms.csv (and norms_normalized.csv), fits.csv when tracking, slices.csv,
/// snapshot_<step>.asbq at the configured times, final.asbq (or
/// last_good.asbq after a fault) and report.json.
RunReport run(const ExperimentConfig& c, const RunOptions& options = {});

std::string report_json(const ExperimentConfig& c, const RunReport& r);

}  // namespace asbq
