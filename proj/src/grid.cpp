#include "asbq/grid.hpp"

#include <bit>
#include <cmath>
#include <numbers>

namespace asbq {

namespace {

constexpr std::size_t kMinModes = 4;

void check_axis(std::size_t n, double l, const char* name) {
  if (n < kMinModes || !std::has_single_bit(n)) {
    throw GridError(std::string("grid sizing error: N_") + name + " = " + std::to_string(n) +
                    " must be a power of two >= " + std::to_string(kMinModes));
  }
  if (!(l > 0.0) || !std::isfinite(l)) {
    throw GridError(std::string("grid scale error: L_") + name + " must be positive");
  }
}

std::vector<double> make_nodes(std::size_t n, double l) {
  std::vector<double> x(n);
  const double h = 2.0 * std::numbers::pi * l / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = -std::numbers::pi * l + static_cast<double>(i + 1) * h;
  }
  return x;
}

std::vector<double> make_wavenumbers(std::size_t n, double l) {
  std::vector<double> k(n);
  const auto half = static_cast<std::ptrdiff_t>(n / 2);
  for (std::size_t i = 0; i < n; ++i) {
    auto m = static_cast<std::ptrdiff_t>(i);
    if (m >= half) m -= static_cast<std::ptrdiff_t>(n);
    k[i] = static_cast<double>(m) / l;
  }
  return k;
}

}  // namespace

const char* to_string(Axis a) { return a == Axis::x ? "x" : "y"; }

Axis parse_axis(const std::string& s) {
  if (s == "x" || s == "kx") return Axis::x;
  if (s == "y" || s == "ky") return Axis::y;
  throw std::invalid_argument("unknown axis '" + s + "' (expected x or y)");
}

double TorusGrid::period(Axis a) const { return 2.0 * std::numbers::pi * scale(a); }

double TorusGrid::spacing(Axis a) const {
  if (a == Axis::y && is_1d()) throw GridError("one-dimensional grid has no y axis");
  return period(a) / static_cast<double>(modes(a));
}

double TorusGrid::cell_measure() const {
  return is_1d() ? spacing(Axis::x) : spacing(Axis::x) * spacing(Axis::y);
}

double TorusGrid::domain_measure() const {
  return is_1d() ? period(Axis::x) : period(Axis::x) * period(Axis::y);
}

std::span<const double> TorusGrid::nodes(Axis a) const {
  if (a == Axis::y && is_1d()) throw GridError("one-dimensional grid has no y axis");
  return a == Axis::x ? std::span<const double>(d_->x) : std::span<const double>(d_->y);
}

std::span<const double> TorusGrid::wavenumbers(Axis a) const {
  if (a == Axis::y && is_1d()) {
    static const std::vector<double> zero{0.0};
    return zero;
  }
  return a == Axis::x ? std::span<const double>(d_->kx) : std::span<const double>(d_->ky);
}

double TorusGrid::max_wavenumber(Axis a) const {
  if (a == Axis::y && is_1d()) return 0.0;
  return static_cast<double>(modes(a) / 2 - 1) / scale(a);
}

bool TorusGrid::same_as(const TorusGrid& o) const {
  return d_ == o.d_ || (dims() == o.dims() && nx() == o.nx() && ny() == o.ny() &&
                        lx() == o.lx() && ly() == o.ly());
}

TorusGrid make_grid(int dims, std::size_t nx, std::optional<std::size_t> ny, double lx,
                    std::optional<double> ly) {
  if (dims != 1 && dims != 2) throw GridError("grid dims must be 1 or 2");
  check_axis(nx, lx, "x");
  auto d = std::make_shared<TorusGrid::Data>();
  d->dims = dims;
  d->nx = nx;
  d->lx = lx;
  d->x = make_nodes(nx, lx);
  d->kx = make_wavenumbers(nx, lx);
  if (dims == 2) {
    if (!ny || !ly) throw GridError("two-dimensional grid needs N_y and L_y");
    check_axis(*ny, *ly, "y");
    d->ny = *ny;
    d->ly = *ly;
    d->y = make_nodes(*ny, *ly);
    d->ky = make_wavenumbers(*ny, *ly);
  }
  d->transform = std::make_unique<FourierTransform>(d->nx, d->ny);
  return TorusGrid(std::move(d));
}

}  // namespace asbq
