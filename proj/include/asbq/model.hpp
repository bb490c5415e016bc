#pragma once

#include <span>
#include <stdexcept>

#include "asbq/fft.hpp"
#include "asbq/grid.hpp"
#include "asbq/spectral.hpp"

namespace asbq {

/// Nonlinearity and dispersion coefficients of
///   eta_t + div v + eps_nl div(eta v) = 0,
///   v_t + grad eta + eps_nl grad |v|^2 / 2 - eps_disp Lap v_t = 0.
/// eps_nl == eps_disp is the Boussinesq scaling; eps_nl = 1 the long-time
/// rescaling used for dispersive shocks.
struct ModelParams {
  double eps_nl = 1.0;
  double eps_disp = 1.0;

  static ModelParams boussinesq(double eps) { return {eps, eps}; }
  static ModelParams rescaled(double eps) { return {1.0, eps}; }

  /// Throws std::invalid_argument unless eps_nl >= 0 and eps_disp > 0.
  void validate() const;
};

enum class Field { eta, vx, vy };
const char* to_string(Field f);
Field parse_field(const std::string& s);

/// Surface elevation and horizontal velocity on a grid at time t. In 1D the
/// vy array is empty.
struct WaveState {
  double t = 0.0;
  TorusGrid grid;
  RealArray eta;
  RealArray vx;
  RealArray vy;

  static WaveState rest(const TorusGrid& grid, double t = 0.0);

  std::span<const double> field(Field f) const;
  std::span<double> field(Field f);
  /// Throws std::invalid_argument if array sizes do not conform to the grid.
  void validate() const;
};

struct Tendency {
  RealArray eta;
  RealArray vx;
  RealArray vy;
};

/// Spectral representation of the unknowns, the working state of the
/// time integrator.
struct SpectralState {
  ComplexArray eta;
  ComplexArray vx;
  ComplexArray vy;
};

/// y += a * x, componentwise.
void axpy(SpectralState& y, double a, const SpectralState& x);
bool all_finite(const SpectralState& s);
/// Resizes dst to the component sizes of like (contents unspecified).
void match_shape(SpectralState& dst, const SpectralState& like);

/// Pseudospectral tendency of the Amick-Schonbek system: products formed on
/// nodes, derivatives and the Helmholtz inversion applied to coefficients.
///
/// Holds transform scratch, so one evaluator must not be shared between
/// threads; build one per evolution.
class TendencyEvaluator {
 public:
  TendencyEvaluator(TorusGrid grid, ModelParams params, bool dealias = false);

  const TorusGrid& grid() const { return grid_; }
  const ModelParams& params() const { return params_; }

  void operator()(const SpectralState& in, SpectralState& out);

  SpectralState to_spectral(const WaveState& s) const;
  WaveState to_physical(const SpectralState& s, double t) const;
  SpectralState zeros() const;

 private:
  TorusGrid grid_;
  ModelParams params_;
  bool dealias_;
  ComplexArray scratch_c_;
  RealArray eta_, vx_, vy_, prod_;
  ComplexArray flux_x_, flux_y_, bernoulli_;
};

/// Tendency (eta_t, vx_t, vy_t) of a 2D state. Throws for 1D states or
/// eps_disp <= 0.
Tendency rhs_2d(const WaveState& s, const ModelParams& p);

/// eta_t = -(v + eps_nl eta v)_x, v_t = (1 - eps_disp d_xx)^-1 (-eta_x - eps_nl v v_x).
Tendency rhs_1d(const WaveState& s, const ModelParams& p);

/// min over nodes of 1 + eps_nl eta; may be negative.
double cavitation_indicator(const WaveState& s, const ModelParams& p);

}  // namespace asbq
