#pragma once

#include <optional>
#include <span>
#include <vector>

#include "asbq/fft.hpp"
#include "asbq/grid.hpp"

namespace asbq {

/// Fourier coefficients of a real field on a TorusGrid, in the grid's
/// half-spectrum layout, with a lazily computed physical-space copy.
///
/// The cache is dropped whenever mutable coefficients are requested. Reading
/// physical() fills the cache, so a field shared across threads must be
/// materialized first.
class SpectralField {
 public:
  explicit SpectralField(TorusGrid grid);
  SpectralField(TorusGrid grid, ComplexArray coefficients);

  static SpectralField from_physical(const TorusGrid& grid, std::span<const double> values);

  const TorusGrid& grid() const { return grid_; }

  std::span<const Complex> coefficients() const { return coeffs_; }
  std::span<Complex> mutable_coefficients() {
    physical_.reset();
    return coeffs_;
  }

  /// Coefficient for signed mode indices (mx, my); negative mx is read from
  /// the Hermitian partner.
  Complex mode(long mx, long my = 0) const;

  std::span<const double> physical() const&;
  std::span<const double> physical() const&& = delete;

  /// Linear index into the half-spectrum layout.
  std::size_t index(std::size_t i, std::size_t j) const { return j * grid_.spectral_nx() + i; }

 private:
  TorusGrid grid_;
  ComplexArray coeffs_;
  mutable std::optional<RealArray> physical_;
};

/// Multiplies coefficients by (i k)^order along `axis`. order must be 1 or 2;
/// first derivatives zero the Nyquist mode of that axis.
SpectralField spectral_derivative(const SpectralField& f, Axis axis, int order);

/// Solves (1 - eps_disp Laplacian) g = f mode by mode.
SpectralField helmholtz_inverse(const SpectralField& f, double eps_disp);

/// In-place 2/3-rule truncation.
void dealias_two_thirds(const TorusGrid& grid, std::span<Complex> coeffs);

enum class NormKind { l2, l4, linf, h1_seminorm };

/// Maps p in {2, 4, inf} to a NormKind; throws std::invalid_argument otherwise.
NormKind lp_norm_kind(double p);

/// L^p norms use grid quadrature, (cell * sum |f|^p)^(1/p); L^inf is the grid
/// maximum. The H^1 seminorm is the Parseval sum of |k|^2 |f_k|^2 times the
/// domain measure, excluding the Nyquist mode of each gradient component so it
/// agrees with the quadrature of |grad f|^2 built from spectral derivatives.
double norm_functional(const SpectralField& f, NormKind kind);
std::vector<double> norm_functionals(const SpectralField& f, std::span<const NormKind> kinds);

/// L^2 norm via Parseval on the coefficients.
double parseval_l2(const SpectralField& f);

/// Weighted sum over the half spectrum of w(i, j) |c|^2 counting Hermitian
/// partners; used by the Parseval-based functionals.
template <class Weight>
double half_spectrum_energy(const TorusGrid& grid, std::span<const Complex> c, Weight&& w) {
  const std::size_t sx = grid.spectral_nx();
  const std::size_t nx = grid.nx();
  double acc = 0.0;
  for (std::size_t j = 0; j < grid.ny(); ++j) {
    for (std::size_t i = 0; i < sx; ++i) {
      const double mult = (i == 0 || (nx % 2 == 0 && i == nx / 2)) ? 1.0 : 2.0;
      acc += mult * w(i, j) * std::norm(c[j * sx + i]);
    }
  }
  return acc;
}

}  // namespace asbq
