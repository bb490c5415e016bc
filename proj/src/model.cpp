#include "asbq/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace asbq {

void ModelParams::validate() const {
  if (!(eps_nl >= 0.0) || !std::isfinite(eps_nl)) {
    throw std::invalid_argument("model: eps_nl must be finite and >= 0");
  }
  if (!(eps_disp > 0.0) || !std::isfinite(eps_disp)) {
    throw std::invalid_argument(
        "model: eps_disp must be > 0 (the dispersionless shallow-water limit is not supported)");
  }
}

const char* to_string(Field f) {
  switch (f) {
    case Field::eta: return "eta";
    case Field::vx: return "vx";
    case Field::vy: return "vy";
  }
  return "?";
}

Field parse_field(const std::string& s) {
  if (s == "eta") return Field::eta;
  if (s == "vx" || s == "v") return Field::vx;
  if (s == "vy") return Field::vy;
  throw std::invalid_argument("unknown field '" + s + "' (expected eta, vx or vy)");
}

WaveState WaveState::rest(const TorusGrid& grid, double t) {
  WaveState s{t, grid, RealArray(grid.size()), RealArray(grid.size()), {}};
  if (!grid.is_1d()) s.vy.assign(grid.size(), 0.0);
  return s;
}

std::span<const double> WaveState::field(Field f) const {
  switch (f) {
    case Field::eta: return eta;
    case Field::vx: return vx;
    case Field::vy: return vy;
  }
  return {};
}

std::span<double> WaveState::field(Field f) {
  switch (f) {
    case Field::eta: return eta;
    case Field::vx: return vx;
    case Field::vy: return vy;
  }
  return {};
}

void WaveState::validate() const {
  const std::size_t n = grid.size();
  const std::size_t ny_expected = grid.is_1d() ? 0 : n;
  if (eta.size() != n || vx.size() != n || vy.size() != ny_expected) {
    throw std::invalid_argument("wave state fields do not conform to the grid");
  }
}

void axpy(SpectralState& y, double a, const SpectralState& x) {
  auto one = [a](ComplexArray& dst, const ComplexArray& src) {
    const std::size_t n = dst.size();
    for (std::size_t i = 0; i < n; ++i) dst[i] += a * src[i];
  };
  one(y.eta, x.eta);
  one(y.vx, x.vx);
  one(y.vy, x.vy);
}

bool all_finite(const SpectralState& s) {
  auto ok = [](const ComplexArray& a) {
    // NaN and Inf both poison a sum; a single pass keeps the guard cheap.
    double acc = 0.0;
    for (const auto& z : a) acc += z.real() + z.imag();
    return std::isfinite(acc);
  };
  return ok(s.eta) && ok(s.vx) && ok(s.vy);
}

void match_shape(SpectralState& dst, const SpectralState& like) {
  dst.eta.resize(like.eta.size());
  dst.vx.resize(like.vx.size());
  dst.vy.resize(like.vy.size());
}

TendencyEvaluator::TendencyEvaluator(TorusGrid grid, ModelParams params, bool dealias)
    : grid_(std::move(grid)), params_(params), dealias_(dealias) {
  params_.validate();
  const std::size_t n = grid_.size();
  const std::size_t m = grid_.spectral_size();
  scratch_c_.resize(m);
  eta_.resize(n);
  vx_.resize(n);
  prod_.resize(n);
  flux_x_.resize(m);
  bernoulli_.resize(m);
  if (!grid_.is_1d()) {
    vy_.resize(n);
    flux_y_.resize(m);
  }
}

SpectralState TendencyEvaluator::zeros() const {
  const std::size_t m = grid_.spectral_size();
  SpectralState s{ComplexArray(m), ComplexArray(m), {}};
  if (!grid_.is_1d()) s.vy.resize(m);
  return s;
}

SpectralState TendencyEvaluator::to_spectral(const WaveState& s) const {
  s.validate();
  if (!s.grid.same_as(grid_)) throw std::invalid_argument("state grid differs from evaluator grid");
  SpectralState out = zeros();
  const auto& ft = grid_.transform();
  ft.forward(s.eta, out.eta);
  ft.forward(s.vx, out.vx);
  if (!grid_.is_1d()) ft.forward(s.vy, out.vy);
  return out;
}

WaveState TendencyEvaluator::to_physical(const SpectralState& s, double t) const {
  WaveState out = WaveState::rest(grid_, t);
  const auto& ft = grid_.transform();
  ft.inverse(s.eta, out.eta);
  ft.inverse(s.vx, out.vx);
  if (!grid_.is_1d()) ft.inverse(s.vy, out.vy);
  return out;
}

void TendencyEvaluator::operator()(const SpectralState& in, SpectralState& out) {
  match_shape(out, in);
  const auto& ft = grid_.transform();
  const bool two_d = !grid_.is_1d();
  const std::size_t n = grid_.size();
  const std::size_t sx = grid_.spectral_nx();
  const double enl = params_.eps_nl;
  const double edisp = params_.eps_disp;

  auto to_nodes = [&](const ComplexArray& c, RealArray& r) {
    std::copy(c.begin(), c.end(), scratch_c_.begin());
    ft.inverse_destructive(scratch_c_, r);
  };
  to_nodes(in.eta, eta_);
  to_nodes(in.vx, vx_);
  if (two_d) to_nodes(in.vy, vy_);

  // eta * vx
  for (std::size_t i = 0; i < n; ++i) prod_[i] = eta_[i] * vx_[i];
  ft.forward(prod_, flux_x_);
  if (two_d) {
    for (std::size_t i = 0; i < n; ++i) prod_[i] = eta_[i] * vy_[i];
    ft.forward(prod_, flux_y_);
    for (std::size_t i = 0; i < n; ++i) prod_[i] = 0.5 * (vx_[i] * vx_[i] + vy_[i] * vy_[i]);
  } else {
    for (std::size_t i = 0; i < n; ++i) prod_[i] = 0.5 * vx_[i] * vx_[i];
  }
  ft.forward(prod_, bernoulli_);

  if (dealias_) {
    dealias_two_thirds(grid_, flux_x_);
    if (two_d) dealias_two_thirds(grid_, flux_y_);
    dealias_two_thirds(grid_, bernoulli_);
  }

  const auto kx = grid_.wavenumbers(Axis::x);
  const auto ky = grid_.wavenumbers(Axis::y);
  const Complex I(0.0, 1.0);
  for (std::size_t j = 0; j < grid_.ny(); ++j) {
    const double kyj = two_d ? ky[j] : 0.0;
    const bool ny_nyq = two_d && grid_.is_nyquist(Axis::y, j);
    const double dky = ny_nyq ? 0.0 : kyj;
    for (std::size_t i = 0; i < sx; ++i) {
      const std::size_t idx = j * sx + i;
      const double dkx = grid_.is_nyquist(Axis::x, i) ? 0.0 : kx[i];
      const double lap = kx[i] * kx[i] + kyj * kyj;
      const double inv = 1.0 / (1.0 + edisp * lap);

      const Complex fx = in.vx[idx] + enl * flux_x_[idx];
      Complex div = I * dkx * fx;
      const Complex pressure = in.eta[idx] + enl * bernoulli_[idx];
      out.vx[idx] = -I * dkx * pressure * inv;
      if (two_d) {
        const Complex fy = in.vy[idx] + enl * flux_y_[idx];
        div += I * dky * fy;
        out.vy[idx] = -I * dky * pressure * inv;
      }
      out.eta[idx] = -div;
    }
  }
}

namespace {

Tendency tendency_of(const WaveState& s, const ModelParams& p) {
  p.validate();
  s.validate();
  TendencyEvaluator f(s.grid, p);
  const SpectralState in = f.to_spectral(s);
  SpectralState out = f.zeros();
  f(in, out);
  WaveState phys = f.to_physical(out, s.t);
  return {std::move(phys.eta), std::move(phys.vx), std::move(phys.vy)};
}

}  // namespace

Tendency rhs_2d(const WaveState& s, const ModelParams& p) {
  if (s.grid.is_1d()) throw std::invalid_argument("rhs_2d: state lives on a 1D grid");
  return tendency_of(s, p);
}

Tendency rhs_1d(const WaveState& s, const ModelParams& p) {
  if (!s.grid.is_1d()) throw std::invalid_argument("rhs_1d: state lives on a 2D grid");
  return tendency_of(s, p);
}

double cavitation_indicator(const WaveState& s, const ModelParams& p) {
  double m = std::numeric_limits<double>::infinity();
  for (double e : s.eta) m = std::min(m, 1.0 + p.eps_nl * e);
  return m;
}

}  // namespace asbq
