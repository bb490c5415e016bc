#include "asbq/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace asbq {

SpectralField::SpectralField(TorusGrid grid)
    : grid_(std::move(grid)), coeffs_(grid_.spectral_size()) {}

SpectralField::SpectralField(TorusGrid grid, ComplexArray coefficients)
    : grid_(std::move(grid)), coeffs_(std::move(coefficients)) {
  if (coeffs_.size() != grid_.spectral_size()) {
    throw std::invalid_argument("SpectralField: coefficient count does not match grid");
  }
}

SpectralField SpectralField::from_physical(const TorusGrid& grid, std::span<const double> values) {
  if (values.size() != grid.size()) {
    throw std::invalid_argument("SpectralField: physical field does not match grid");
  }
  SpectralField f(grid);
  grid.transform().forward(values, f.coeffs_);
  f.physical_.emplace(values.begin(), values.end());
  return f;
}

Complex SpectralField::mode(long mx, long my) const {
  const long nx = static_cast<long>(grid_.nx());
  const long ny = static_cast<long>(grid_.ny());
  auto wrap = [](long m, long n) { return ((m % n) + n) % n; };
  long ix = wrap(mx, nx);
  long iy = wrap(my, ny);
  if (ix <= nx / 2) return coeffs_[index(static_cast<std::size_t>(ix), static_cast<std::size_t>(iy))];
  ix = wrap(-mx, nx);
  iy = wrap(-my, ny);
  return std::conj(coeffs_[index(static_cast<std::size_t>(ix), static_cast<std::size_t>(iy))]);
}

std::span<const double> SpectralField::physical() const& {
  if (!physical_) {
    RealArray out(grid_.size());
    grid_.transform().inverse(coeffs_, out);
    physical_ = std::move(out);
  }
  return *physical_;
}

SpectralField spectral_derivative(const SpectralField& f, Axis axis, int order) {
  const TorusGrid& g = f.grid();
  if (order != 1 && order != 2) {
    throw std::invalid_argument("spectral_derivative: order must be 1 or 2");
  }
  if (axis == Axis::y && g.is_1d()) {
    throw std::invalid_argument("spectral_derivative: no y direction on a 1D grid");
  }
  SpectralField out(g);
  auto in = f.coefficients();
  auto dst = out.mutable_coefficients();
  const auto k = g.wavenumbers(axis);
  const std::size_t sx = g.spectral_nx();
  for (std::size_t j = 0; j < g.ny(); ++j) {
    for (std::size_t i = 0; i < sx; ++i) {
      const std::size_t m = axis == Axis::x ? i : j;
      const std::size_t idx = j * sx + i;
      if (order == 1) {
        dst[idx] = g.is_nyquist(axis, m) ? Complex{} : Complex(0.0, k[m]) * in[idx];
      } else {
        dst[idx] = -k[m] * k[m] * in[idx];
      }
    }
  }
  return out;
}

SpectralField helmholtz_inverse(const SpectralField& f, double eps_disp) {
  if (!(eps_disp >= 0.0)) throw std::invalid_argument("helmholtz_inverse: eps_disp must be >= 0");
  const TorusGrid& g = f.grid();
  SpectralField out(g);
  auto in = f.coefficients();
  auto dst = out.mutable_coefficients();
  const auto kx = g.wavenumbers(Axis::x);
  const auto ky = g.wavenumbers(Axis::y);
  const std::size_t sx = g.spectral_nx();
  for (std::size_t j = 0; j < g.ny(); ++j) {
    const double ky2 = ky[g.is_1d() ? 0 : j] * ky[g.is_1d() ? 0 : j];
    for (std::size_t i = 0; i < sx; ++i) {
      dst[j * sx + i] = in[j * sx + i] / (1.0 + eps_disp * (kx[i] * kx[i] + ky2));
    }
  }
  return out;
}

void dealias_two_thirds(const TorusGrid& g, std::span<Complex> coeffs) {
  const std::size_t sx = g.spectral_nx();
  const std::size_t cut_x = g.nx() / 3;
  const std::size_t cut_y = g.ny() / 3;
  for (std::size_t j = 0; j < g.ny(); ++j) {
    const std::size_t my = std::min(j, g.ny() - j);
    for (std::size_t i = 0; i < sx; ++i) {
      if (i > cut_x || (!g.is_1d() && my > cut_y)) coeffs[j * sx + i] = Complex{};
    }
  }
}

NormKind lp_norm_kind(double p) {
  if (p == 2.0) return NormKind::l2;
  if (p == 4.0) return NormKind::l4;
  if (std::isinf(p) && p > 0) return NormKind::linf;
  throw std::invalid_argument("unsupported L^p norm: p = " + std::to_string(p) +
                              " (supported: 2, 4, inf)");
}

double parseval_l2(const SpectralField& f) {
  const double e = half_spectrum_energy(f.grid(), f.coefficients(),
                                        [](std::size_t, std::size_t) { return 1.0; });
  return std::sqrt(e * f.grid().domain_measure());
}

double norm_functional(const SpectralField& f, NormKind kind) {
  const TorusGrid& g = f.grid();
  switch (kind) {
    case NormKind::linf: {
      double m = 0.0;
      for (double v : f.physical()) m = std::max(m, std::abs(v));
      return m;
    }
    case NormKind::l2: {
      double s = 0.0;
      for (double v : f.physical()) s += v * v;
      return std::sqrt(s * g.cell_measure());
    }
    case NormKind::l4: {
      double s = 0.0;
      for (double v : f.physical()) s += (v * v) * (v * v);
      return std::pow(s * g.cell_measure(), 0.25);
    }
    case NormKind::h1_seminorm: {
      const auto kx = g.wavenumbers(Axis::x);
      const auto ky = g.wavenumbers(Axis::y);
      const double e = half_spectrum_energy(g, f.coefficients(), [&](std::size_t i, std::size_t j) {
        double w = g.is_nyquist(Axis::x, i) ? 0.0 : kx[i] * kx[i];
        if (!g.is_1d() && !g.is_nyquist(Axis::y, j)) w += ky[j] * ky[j];
        return w;
      });
      return std::sqrt(e * g.domain_measure());
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

std::vector<double> norm_functionals(const SpectralField& f, std::span<const NormKind> kinds) {
  std::vector<double> out;
  out.reserve(kinds.size());
  for (NormKind k : kinds) out.push_back(norm_functional(f, k));
  return out;
}

}  // namespace asbq
