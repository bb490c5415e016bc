#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "asbq/fft.hpp"

namespace asbq {

enum class Axis { x, y };

const char* to_string(Axis a);
Axis parse_axis(const std::string& s);

class GridError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Periodic grid on [-pi L_x, pi L_x) (x [-pi L_y, pi L_y) in 2D).
///
/// Node n = 1..N sits at x_n = -pi L + 2 pi L n / N; array index i = n - 1.
/// Fields are stored row-major with x fastest, i.e. value(i, j) = f[j * nx + i].
/// Mode index m in signed FFT order {0, 1, .., N/2-1, -N/2, .., -1} carries
/// wavenumber m / L. Spectral arrays use the real-to-complex half layout:
/// ny rows of nx/2 + 1 coefficients (kx >= 0 except the Nyquist column).
///
/// Copies share storage; a grid is immutable once built.
class TorusGrid {
 public:
  int dims() const { return d_->dims; }
  bool is_1d() const { return d_->dims == 1; }
  std::size_t nx() const { return d_->nx; }
  /// 1 for one-dimensional grids.
  std::size_t ny() const { return d_->ny; }
  double lx() const { return d_->lx; }
  /// 0 for one-dimensional grids.
  double ly() const { return d_->ly; }

  std::size_t size() const { return d_->nx * d_->ny; }
  std::size_t spectral_nx() const { return d_->nx / 2 + 1; }
  std::size_t spectral_size() const { return spectral_nx() * d_->ny; }

  std::size_t modes(Axis a) const { return a == Axis::x ? d_->nx : d_->ny; }
  double scale(Axis a) const { return a == Axis::x ? d_->lx : d_->ly; }
  /// Domain length 2 pi L along an axis.
  double period(Axis a) const;
  double spacing(Axis a) const;
  /// Area (2D) or length (1D) of one grid cell.
  double cell_measure() const;
  /// Total domain measure, prod(2 pi L).
  double domain_measure() const;

  std::span<const double> nodes(Axis a) const;
  /// Signed-order wavenumbers of length N for the axis.
  std::span<const double> wavenumbers(Axis a) const;
  /// Largest resolved wavenumber (N/2 - 1) / L.
  double max_wavenumber(Axis a) const;
  /// Index of the node at coordinate 0 (n = N/2).
  std::size_t origin_index(Axis a) const { return modes(a) / 2 - 1; }
  bool is_nyquist(Axis a, std::size_t mode_index) const {
    return modes(a) > 1 && mode_index == modes(a) / 2;
  }

  const FourierTransform& transform() const { return *d_->transform; }

  bool same_as(const TorusGrid& o) const;

 private:
  struct Data {
    int dims = 1;
    std::size_t nx = 0, ny = 1;
    double lx = 0, ly = 0;
    std::vector<double> x, y, kx, ky;
    std::unique_ptr<FourierTransform> transform;
  };
  explicit TorusGrid(std::shared_ptr<const Data> d) : d_(std::move(d)) {}
  std::shared_ptr<const Data> d_;

  friend TorusGrid make_grid(int, std::size_t, std::optional<std::size_t>, double,
                             std::optional<double>);
};

/// Throws GridError for non-power-of-two or too small mode counts and for
/// non-positive scale factors.
TorusGrid make_grid(int dims, std::size_t nx, std::optional<std::size_t> ny, double lx,
                    std::optional<double> ly);

inline TorusGrid make_grid_1d(std::size_t nx, double lx) {
  return make_grid(1, nx, std::nullopt, lx, std::nullopt);
}
inline TorusGrid make_grid_2d(std::size_t nx, std::size_t ny, double lx, double ly) {
  return make_grid(2, nx, ny, lx, ly);
}

}  // namespace asbq
