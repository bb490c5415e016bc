#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "asbq/grid.hpp"
#include "asbq/model.hpp"
#include "asbq/singularity.hpp"

namespace asbq {

/// Schema violation; the message starts with the JSON path, e.g.
/// "grid.nx: expected a power of two".
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GridSpec {
  int dims = 2;
  std::size_t nx = 256;
  std::size_t ny = 256;
  double lx = 1.0;
  double ly = 1.0;

  TorusGrid build() const;
};

/// Initial data kinds. Solitary-wave kinds build a profile of speed c on the
/// x axis of the run grid with eps = model.eps_nl (which must equal eps_disp).
struct GaussianPerturbationSpec {
  double c = 2.0;
  Field field = Field::eta;
  double amplitude = 0.0;
  double alpha = 1.0;
};
struct CosDeformationSpec {
  double c = 2.0;
  double a = 0.0;
};
struct LineWaveSpec {
  double c = 2.0;
};
struct CavitationSpec {
  double kappa = -1.0;
  double alpha = 1.0;
};
struct LocalizedSpec {
  double kappa = 1.0;
  double alpha = 1.0;
};
struct SnapshotFileSpec {
  std::string path;
};

using InitialSpec = std::variant<GaussianPerturbationSpec, CosDeformationSpec, LineWaveSpec,
                                 CavitationSpec, LocalizedSpec, SnapshotFileSpec>;

struct TimeSpec {
  double t_end = 1.0;
  std::size_t steps = 100;
};

struct DiagnosticsSpec {
  std::size_t stride = 10;
  /// Also write norms_normalized.csv with norms divided by their t = 0 values.
  bool normalize = false;
};

struct TrackingSpec {
  bool enabled = false;
  std::size_t stride = 10;
  std::vector<Field> fields{Field::eta, Field::vx, Field::vy};
  std::vector<Axis> axes{Axis::x};
  std::vector<Field> stop_fields;
  double kappa_stop = 1.0;
  /// The stop policy ignores fits before this time.
  double stop_after = 0.0;
  FitWindow window;
};

struct OutputSpec {
  std::string directory = "out";
  std::vector<double> snapshot_times;
  std::vector<Axis> slice_axes{Axis::x};
  std::size_t slice_stride = 100;
};

struct ExperimentConfig {
  std::optional<std::string> preset;
  GridSpec grid;
  ModelParams model;
  InitialSpec initial;
  TimeSpec time;
  DiagnosticsSpec diagnostics;
  TrackingSpec tracking;
  OutputSpec output;
};

/// Parses and validates a JSON document. Every section except "initial_data"
/// is optional and defaults as above; unknown keys are errors.
ExperimentConfig parse_config(const std::string& text);

/// Fully explicit JSON; parse_config(to_json(c)) reproduces c exactly.
std::string to_json(const ExperimentConfig& c);

/// Checks cross-field constraints; throws ConfigError.
void validate(const ExperimentConfig& c);

}  // namespace asbq
