#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "asbq/grid.hpp"
#include "asbq/model.hpp"

namespace asbq {

class ProfileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Traveling-wave profile eta = Q(x - ct), v = V(x - ct) of the 1D system with
/// eps_nl = eps_disp = eps, centered at x = 0.
struct SolitaryProfile {
  double c = 0.0;
  double eps = 1.0;
  TorusGrid grid;
  RealArray Q;
  RealArray V;
  /// max |R(V)| of the profile equation at the returned V.
  double residual_norm = 0.0;
  int newton_iterations = 0;
  /// Speeds visited by continuation, empty when the direct solve converged.
  std::vector<double> continuation_path;
  /// Non-fatal construction notes, e.g. a domain too short for the tail.
  std::vector<std::string> warnings;

  double amplitude() const;
  /// Far-field decay rate sqrt((c^2 - 1) / (eps c^2)).
  double tail_rate() const;
};

/// R(V) = eps c V'' - c V + eps V^2 / 2 + V / (c - eps V), with spectral V''.
/// Zero exactly when V is a profile. Throws ProfileError when eps V reaches c
/// anywhere (reports the offending node) and std::invalid_argument when c <= 1.
RealArray profile_residual(std::span<const double> V, double c, double eps,
                           const TorusGrid& grid1d);

struct ProfileSolverOptions {
  /// Convergence when max |R| <= tolerance * max |V|; raised to the round-off
  /// level machine_eps * eps * c * k_max^2 of the spectral second derivative.
  double tolerance = 1e-11;
  int max_newton = 40;
  int krylov_restart = 80;
  int max_krylov = 800;
  double krylov_tolerance = 1e-13;
  double continuation_start = 1.05;
  double continuation_step = 0.05;
};

/// Newton iteration on R(V) = 0 restricted to even profiles; each linear
/// system is solved by restarted GMRES right-preconditioned with the Fourier
/// multiplier (eps c d_xx - c + 1/c)^-1. Seeds with a sech^2 pulse (or `seed`)
/// and falls back to continuation in c from continuation_start when the
/// direct solve fails. Throws ProfileError if both fail.
SolitaryProfile solve_profile(double c, double eps, const TorusGrid& grid1d,
                              std::optional<std::span<const double>> seed = std::nullopt,
                              const ProfileSolverOptions& options = {});

/// Fourier interpolation of a periodic 1D field at x + shift on every node.
RealArray shifted_profile(std::span<const double> values, const TorusGrid& grid1d, double shift);

/// eta(x, y) = Q(x), vx(x, y) = V(x), vy = 0. The 2D grid must match the
/// profile grid along x (same N_x and L_x).
WaveState line_extend(const SolitaryProfile& p, const TorusGrid& grid2d);

/// Line wave plus amplitude * exp(-x^2 - alpha y^2) added to `field`.
struct GaussianPerturbation {
  std::shared_ptr<const SolitaryProfile> profile;
  Field field = Field::eta;
  double amplitude = 0.0;
  double alpha = 1.0;
};

/// eta(x, y) = Q(x + a cos y), vx = V(x), vy = 0.
struct CosDeformation {
  std::shared_ptr<const SolitaryProfile> profile;
  double a = 0.0;
};

/// Unperturbed line (2D) or solitary (1D) wave.
struct LineWave {
  std::shared_ptr<const SolitaryProfile> profile;
};

/// eta = kappa exp(-(x^2 + alpha y^2)), v = 0. `cavitation` requires
/// kappa < 0, `localized` kappa > 0; on a 1D grid alpha is ignored.
struct GaussianHump {
  double kappa = -1.0;
  double alpha = 1.0;
  bool cavitation = true;
};

using InitialDataSpec = std::variant<GaussianPerturbation, CosDeformation, LineWave, GaussianHump>;

/// Throws std::invalid_argument for out-of-range parameters or a grid that
/// does not match the profile.
WaveState build_initial_data(const InitialDataSpec& spec, const TorusGrid& grid);

inline InitialDataSpec gaussian_on_eta(std::shared_ptr<const SolitaryProfile> p, double amp,
                                       double alpha = 1.0) {
  return GaussianPerturbation{std::move(p), Field::eta, amp, alpha};
}
inline InitialDataSpec gaussian_on_vx(std::shared_ptr<const SolitaryProfile> p, double amp,
                                      double alpha = 1.0) {
  return GaussianPerturbation{std::move(p), Field::vx, amp, alpha};
}
inline InitialDataSpec gaussian_on_vy(std::shared_ptr<const SolitaryProfile> p, double amp,
                                      double alpha = 1.0) {
  return GaussianPerturbation{std::move(p), Field::vy, amp, alpha};
}
inline InitialDataSpec cos_deform(std::shared_ptr<const SolitaryProfile> p, double a) {
  return CosDeformation{std::move(p), a};
}
inline InitialDataSpec cavitation(double kappa, double alpha = 1.0) {
  return GaussianHump{kappa, alpha, true};
}
inline InitialDataSpec localized(double kappa, double alpha = 1.0) {
  return GaussianHump{kappa, alpha, false};
}

/// Binary profile file: "ASPW", u8 version, f64 c, f64 eps, u64 N_x, f64 L_x,
/// then Q and V, all little-endian.
void write_profile(std::ostream& out, const SolitaryProfile& p);
SolitaryProfile read_profile(std::istream& in);
void save_profile(const std::string& path, const SolitaryProfile& p);
SolitaryProfile load_profile(const std::string& path);

}  // namespace asbq
