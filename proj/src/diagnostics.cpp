#include "asbq/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

#include "asbq/spectral.hpp"

namespace asbq {

namespace {

constexpr NormKind kKinds[] = {NormKind::linf, NormKind::l2, NormKind::l4, NormKind::h1_seminorm};

FieldNorms field_norms(const SpectralField& f) {
  const auto v = norm_functionals(f, kKinds);
  return {v[0], v[1], v[2], v[3]};
}

bool finite(const FieldNorms& n) {
  return std::isfinite(n.linf) && std::isfinite(n.l2) && std::isfinite(n.l4) &&
         std::isfinite(n.h1);
}

double tail_ratio_of(const SpectralField& f) {
  const TorusGrid& g = f.grid();
  const auto c = f.coefficients();
  const std::size_t sx = g.spectral_nx();
  const auto ky = g.wavenumbers(Axis::y);
  const double kx_cut = 0.9 * g.max_wavenumber(Axis::x);
  const double ky_cut = g.is_1d() ? 0.0 : 0.9 * g.max_wavenumber(Axis::y);
  double top = 0.0;
  double all = 0.0;
  for (std::size_t j = 0; j < g.ny(); ++j) {
    for (std::size_t i = 0; i < sx; ++i) {
      const double m = std::abs(c[j * sx + i]);
      all = std::max(all, m);
      const double kx = static_cast<double>(i) / g.lx();
      const bool in_tail = kx >= kx_cut || (!g.is_1d() && std::abs(ky[j]) >= ky_cut);
      if (in_tail) top = std::max(top, m);
    }
  }
  return all > 0.0 ? top / all : 0.0;
}

Extremum locate(const WaveState& s, Field f, bool want_min) {
  const auto v = s.field(f);
  if (v.empty()) throw std::invalid_argument("field is not present on this grid");
  const auto it = want_min ? std::min_element(v.begin(), v.end())
                           : std::max_element(v.begin(), v.end());
  const auto n = static_cast<std::size_t>(it - v.begin());
  Extremum e;
  e.value = *it;
  e.i = n % s.grid.nx();
  e.j = n / s.grid.nx();
  e.x = s.grid.nodes(Axis::x)[e.i];
  e.y = s.grid.is_1d() ? 0.0 : s.grid.nodes(Axis::y)[e.j];
  return e;
}

void scale_norms(FieldNorms& n, const FieldNorms& ref) {
  auto div = [](double& v, double r) {
    if (r != 0.0) v /= r;
  };
  div(n.linf, ref.linf);
  div(n.l2, ref.l2);
  div(n.l4, ref.l4);
  div(n.h1, ref.h1);
}

void put_norms(std::ostream& out, const FieldNorms& n) {
  out << ',' << n.linf << ',' << n.l2 << ',' << n.l4 << ',' << n.h1;
}

}  // namespace

bool NormRecord::finite() const {
  return std::isfinite(t) && asbq::finite(eta) && asbq::finite(vx) && asbq::finite(vy) &&
         std::isfinite(min_eta) && std::isfinite(cavitation) && std::isfinite(mean_eta) &&
         std::isfinite(mean_vx) && std::isfinite(mean_vy) && std::isfinite(curl_l2) &&
         std::isfinite(tail_ratio);
}

double spectral_tail_ratio(const WaveState& s) {
  double r = tail_ratio_of(SpectralField::from_physical(s.grid, s.eta));
  r = std::max(r, tail_ratio_of(SpectralField::from_physical(s.grid, s.vx)));
  if (!s.grid.is_1d()) r = std::max(r, tail_ratio_of(SpectralField::from_physical(s.grid, s.vy)));
  return r;
}

Extremum field_min(const WaveState& s, Field f) { return locate(s, f, true); }
Extremum field_max(const WaveState& s, Field f) { return locate(s, f, false); }

NormRecord record(const WaveState& s, const ModelParams& p) {
  s.validate();
  const TorusGrid& g = s.grid;
  NormRecord r;
  r.t = s.t;

  const SpectralField eta = SpectralField::from_physical(g, s.eta);
  const SpectralField vx = SpectralField::from_physical(g, s.vx);
  r.eta = field_norms(eta);
  r.vx = field_norms(vx);
  r.mean_eta = eta.coefficients()[0].real();
  r.mean_vx = vx.coefficients()[0].real();
  r.tail_ratio = std::max(tail_ratio_of(eta), tail_ratio_of(vx));

  if (!g.is_1d()) {
    const SpectralField vy = SpectralField::from_physical(g, s.vy);
    r.vy = field_norms(vy);
    r.mean_vy = vy.coefficients()[0].real();
    r.tail_ratio = std::max(r.tail_ratio, tail_ratio_of(vy));

    const SpectralField dxvy = spectral_derivative(vy, Axis::x, 1);
    const SpectralField dyvx = spectral_derivative(vx, Axis::y, 1);
    ComplexArray curl(g.spectral_size());
    for (std::size_t n = 0; n < curl.size(); ++n) {
      curl[n] = dxvy.coefficients()[n] - dyvx.coefficients()[n];
    }
    r.curl_l2 = parseval_l2(SpectralField(g, std::move(curl)));
  }

  r.min_eta = *std::min_element(s.eta.begin(), s.eta.end());
  r.cavitation = 1.0 + p.eps_nl * r.min_eta;
  return r;
}

std::vector<NormRecord> normalize_at_t0(std::span<const NormRecord> series) {
  std::vector<NormRecord> out(series.begin(), series.end());
  if (out.empty()) return out;
  const NormRecord ref = out.front();
  for (auto& r : out) {
    scale_norms(r.eta, ref.eta);
    scale_norms(r.vx, ref.vx);
    scale_norms(r.vy, ref.vy);
  }
  return out;
}

void write_norms_csv_header(std::ostream& out) {
  out << "t";
  for (const char* f : {"eta", "vx", "vy"}) {
    for (const char* n : {"linf", "l2", "l4", "h1"}) out << ',' << f << '_' << n;
  }
  out << ",min_eta,cavitation,mean_eta,mean_vx,mean_vy,curl_l2,tail_ratio\n";
}

void write_norms_csv_row(std::ostream& out, const NormRecord& r) {
  out << std::setprecision(17) << r.t;
  put_norms(out, r.eta);
  put_norms(out, r.vx);
  put_norms(out, r.vy);
  out << ',' << r.min_eta << ',' << r.cavitation << ',' << r.mean_eta << ',' << r.mean_vx << ','
      << r.mean_vy << ',' << r.curl_l2 << ',' << r.tail_ratio << '\n';
}

AxisSlice axis_slice(const WaveState& s, Axis axis) {
  const TorusGrid& g = s.grid;
  if (axis == Axis::y && g.is_1d()) throw std::invalid_argument("axis_slice: 1D grid has no y axis");
  AxisSlice out;
  out.axis = axis;
  out.t = s.t;
  const auto nodes = g.nodes(axis);
  out.coord.assign(nodes.begin(), nodes.end());
  const std::size_t n = g.modes(axis);
  auto take = [&](std::span<const double> f, std::vector<double>& dst) {
    if (f.empty()) return;
    dst.resize(n);
    if (axis == Axis::x) {
      const std::size_t j = g.is_1d() ? 0 : g.origin_index(Axis::y);
      for (std::size_t i = 0; i < n; ++i) dst[i] = f[j * g.nx() + i];
    } else {
      const std::size_t i = g.origin_index(Axis::x);
      for (std::size_t j = 0; j < n; ++j) dst[j] = f[j * g.nx() + i];
    }
  };
  take(s.eta, out.eta);
  take(s.vx, out.vx);
  take(s.vy, out.vy);
  return out;
}

void write_slice_csv_header(std::ostream& out) { out << "t,axis,coord,eta,vx,vy\n"; }

void write_slice_csv_rows(std::ostream& out, const AxisSlice& s) {
  out << std::setprecision(17);
  for (std::size_t n = 0; n < s.coord.size(); ++n) {
    out << s.t << ',' << to_string(s.axis) << ',' << s.coord[n] << ',' << s.eta[n] << ','
        << s.vx[n] << ',' << (s.vy.empty() ? 0.0 : s.vy[n]) << '\n';
  }
}

}  // namespace asbq
