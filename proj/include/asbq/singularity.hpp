#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "asbq/grid.hpp"
#include "asbq/model.hpp"
#include "asbq/spectral.hpp"

namespace asbq {

/// Moduli of the coefficients on the positive half of one wavenumber axis
/// (orthogonal mode index 0), modes n = 1 .. N/2 - 1 at k = n / L.
struct AxisSpectrum {
  std::vector<double> k;
  std::vector<double> modulus;
};

AxisSpectrum axis_modulus(const SpectralField& f, Axis axis);

/// Which part of the tail enters the regression.
///
/// The window is [lo_fraction, hi_fraction] * k_max intersected with the modes
/// whose modulus exceeds floor_factor * machine epsilon * max modulus.
struct FitWindow {
  double lo_fraction = 1.0 / 8.0;
  double hi_fraction = 3.0 / 4.0;
  double floor_factor = 100.0;
  std::size_t min_modes = 16;
};

/// Parameters of log|u_k| ~ C - (mu + 1) log k - delta k over a window.
struct SsfFit {
  double delta = 0.0;
  double mu = 0.0;
  /// Fitted C (log of the prefactor).
  double log_amplitude = 0.0;
  double k_lo = 0.0;
  double k_hi = 0.0;
  std::size_t modes = 0;
  /// Root-mean-square misfit of log-modulus over the window.
  double quality = 0.0;

  bool reliable() const { return quality <= 0.5; }
};

/// Linear least squares on the basis (1, log k, k). Returns nullopt when fewer
/// than window.min_modes usable modes remain (fit unavailable). The round-off
/// floor is taken relative to max(largest modulus, reference); pass the
/// field's largest coefficient so an axis carrying only round-off is skipped.
std::optional<SsfFit> fit_ssf(std::span<const double> k, std::span<const double> modulus,
                              const FitWindow& window = {}, double reference = 0.0);

struct SingularityFit {
  Field field = Field::eta;
  Axis axis = Axis::x;
  double t = 0.0;
  SsfFit fit;
};

struct StopDecision {
  bool stop = false;
  Field field = Field::eta;
  Axis axis = Axis::x;
  double t = 0.0;
  double delta = 0.0;
  double threshold = 0.0;
};

/// Stops when delta <= kappa_stop * h along the fitted axis (negative delta
/// included).
StopDecision stop_check(const SingularityFit& fit, const TorusGrid& grid, double kappa_stop = 1.0);

struct TrackerConfig {
  std::vector<Field> fields{Field::eta, Field::vx, Field::vy};
  std::vector<Axis> axes{Axis::x};
  FitWindow window;
  double kappa_stop = 1.0;
  /// Fields whose fits may trigger the stop; empty means every tracked field.
  std::vector<Field> stop_fields;
};

/// Fits every configured field and axis of a state and keeps the history.
class SingularityTracker {
 public:
  explicit SingularityTracker(TrackerConfig config) : config_(std::move(config)) {}

  /// Fits the state; returns the first firing stop decision among reliable
  /// fits, if any. Every fit is kept in the history.
  std::optional<StopDecision> observe(const WaveState& s);

  const std::vector<SingularityFit>& history() const { return history_; }
  const TrackerConfig& config() const { return config_; }

 private:
  TrackerConfig config_;
  std::vector<SingularityFit> history_;
};

/// Fit history CSV: t,field,axis,delta,mu,C,k_lo,k_hi,quality.
void write_fit_csv_header(std::ostream& out);
void write_fit_csv_row(std::ostream& out, const SingularityFit& f);

/// Zero crossing of a straight line fitted to the last `points` samples of
/// (t, delta); nullopt if fewer than two samples or a non-negative slope.
std::optional<double> extrapolate_zero_crossing(std::span<const double> t,
                                                std::span<const double> delta,
                                                std::size_t points = 4);

}  // namespace asbq
