#include "asbq/singularity.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

namespace asbq {

AxisSpectrum axis_modulus(const SpectralField& f, Axis axis) {
  const TorusGrid& g = f.grid();
  if (axis == Axis::y && g.is_1d()) throw std::invalid_argument("axis_modulus: 1D grid has no k_y axis");
  const std::size_t n = g.modes(axis);
  const auto k = g.wavenumbers(axis);
  AxisSpectrum out;
  out.k.reserve(n / 2);
  out.modulus.reserve(n / 2);
  auto c = f.coefficients();
  for (std::size_t m = 1; m < n / 2; ++m) {
    const std::size_t idx = axis == Axis::x ? f.index(m, 0) : f.index(0, m);
    out.k.push_back(k[m]);
    out.modulus.push_back(std::abs(c[idx]));
  }
  return out;
}

std::optional<SsfFit> fit_ssf(std::span<const double> k, std::span<const double> modulus,
                              const FitWindow& w, double reference) {
  if (k.size() != modulus.size()) throw std::invalid_argument("fit_ssf: size mismatch");
  if (k.empty()) return std::nullopt;
  const double kmax = *std::max_element(k.begin(), k.end());
  const double mmax = *std::max_element(modulus.begin(), modulus.end());
  if (!(mmax > 0.0) || !std::isfinite(mmax)) return std::nullopt;
  const double floor = w.floor_factor * std::numeric_limits<double>::epsilon() * std::max(mmax, reference);
  const double lo = w.lo_fraction * kmax;
  const double hi = w.hi_fraction * kmax;

  std::vector<std::size_t> use;
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (k[i] >= lo && k[i] <= hi && k[i] > 0.0 && modulus[i] > floor) use.push_back(i);
  }
  if (use.size() < std::max<std::size_t>(w.min_modes, 3)) return std::nullopt;

  const auto rows = static_cast<Eigen::Index>(use.size());
  Eigen::MatrixXd A(rows, 3);
  Eigen::VectorXd b(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const double kk = k[use[static_cast<std::size_t>(r)]];
    A(r, 0) = 1.0;
    A(r, 1) = -std::log(kk);
    A(r, 2) = -kk;
    b(r) = std::log(modulus[use[static_cast<std::size_t>(r)]]);
  }
  // Column scaling keeps the QR well conditioned when k spans decades.
  Eigen::Vector3d scale = A.colwise().norm().transpose();
  for (int j = 0; j < 3; ++j) A.col(j) /= scale(j);
  Eigen::Vector3d x = A.colPivHouseholderQr().solve(b);
  const Eigen::VectorXd misfit = A * x - b;
  x = x.cwiseQuotient(scale);

  SsfFit fit;
  fit.log_amplitude = x(0);
  fit.mu = x(1) - 1.0;
  fit.delta = x(2);
  fit.k_lo = k[use.front()];
  fit.k_hi = k[use.back()];
  fit.modes = use.size();
  fit.quality = std::sqrt(misfit.squaredNorm() / static_cast<double>(rows));
  return fit;
}

StopDecision stop_check(const SingularityFit& f, const TorusGrid& grid, double kappa_stop) {
  StopDecision d;
  d.field = f.field;
  d.axis = f.axis;
  d.t = f.t;
  d.delta = f.fit.delta;
  d.threshold = kappa_stop * grid.spacing(f.axis);
  d.stop = !(f.fit.delta > d.threshold);
  return d;
}

std::optional<StopDecision> SingularityTracker::observe(const WaveState& s) {
  std::optional<StopDecision> first;
  for (Field field : config_.fields) {
    if (field == Field::vy && s.grid.is_1d()) continue;
    const SpectralField f = SpectralField::from_physical(s.grid, s.field(field));
    double peak = 0.0;
    for (const Complex& c : f.coefficients()) peak = std::max(peak, std::abs(c));
    for (Axis axis : config_.axes) {
      if (axis == Axis::y && s.grid.is_1d()) continue;
      const AxisSpectrum spec = axis_modulus(f, axis);
      const auto fit = fit_ssf(spec.k, spec.modulus, config_.window, peak);
      if (!fit) continue;
      SingularityFit record{field, axis, s.t, *fit};
      history_.push_back(record);
      const bool may_stop =
          config_.stop_fields.empty() ||
          std::find(config_.stop_fields.begin(), config_.stop_fields.end(), field) !=
              config_.stop_fields.end();
      if (!may_stop || first || !fit->reliable()) continue;
      const StopDecision d = stop_check(record, s.grid, config_.kappa_stop);
      if (d.stop) first = d;
    }
  }
  return first;
}

void write_fit_csv_header(std::ostream& out) {
  out << "t,field,axis,delta,mu,C,k_lo,k_hi,quality\n";
}

void write_fit_csv_row(std::ostream& out, const SingularityFit& f) {
  out << std::setprecision(17) << f.t << ',' << to_string(f.field) << ",k" << to_string(f.axis)
      << ',' << f.fit.delta << ',' << f.fit.mu << ',' << f.fit.log_amplitude << ',' << f.fit.k_lo
      << ',' << f.fit.k_hi << ',' << f.fit.quality << '\n';
}

std::optional<double> extrapolate_zero_crossing(std::span<const double> t,
                                                std::span<const double> delta,
                                                std::size_t points) {
  const std::size_t n = std::min(t.size(), delta.size());
  if (n < 2 || points < 2) return std::nullopt;
  const std::size_t m = std::min(points, n);
  double st = 0, sd = 0, stt = 0, std_ = 0;
  for (std::size_t i = n - m; i < n; ++i) {
    st += t[i];
    sd += delta[i];
    stt += t[i] * t[i];
    std_ += t[i] * delta[i];
  }
  const double md = static_cast<double>(m);
  const double den = md * stt - st * st;
  if (den == 0.0) return std::nullopt;
  const double slope = (md * std_ - st * sd) / den;
  const double icept = (sd - slope * st) / md;
  if (!(slope < 0.0)) return std::nullopt;
  return -icept / slope;
}

}  // namespace asbq
