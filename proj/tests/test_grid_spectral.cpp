#include <doctest.h>

#include <cmath>
#include <vector>

#include "asbq/grid.hpp"
#include "asbq/spectral.hpp"
#include "oracles.hpp"

using namespace asbq;
using oracle::pi;

namespace {

template <class F>
std::vector<double> sample(const TorusGrid& g, F&& f) {
  std::vector<double> out(g.size());
  const auto x = g.nodes(Axis::x);
  for (std::size_t j = 0; j < g.ny(); ++j) {
    const double y = g.is_1d() ? 0.0 : g.nodes(Axis::y)[j];
    for (std::size_t i = 0; i < g.nx(); ++i) out[j * g.nx() + i] = f(x[i], y);
  }
  return out;
}

}  // namespace

TEST_SUITE("grid_spectral") {

TEST_CASE("four-node grid: nodes and signed wavenumbers") {
  const TorusGrid g = make_grid_1d(4, 1.0);
  const std::vector<double> x{-pi / 2, 0.0, pi / 2, pi};
  const std::vector<double> k{0.0, 1.0, -2.0, -1.0};
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(g.nodes(Axis::x)[i] == doctest::Approx(x[i]).epsilon(1e-15));
    CHECK(g.wavenumbers(Axis::x)[i] == k[i]);
  }
  CHECK(g.origin_index(Axis::x) == 1);
  CHECK(g.nodes(Axis::x)[g.origin_index(Axis::x)] == doctest::Approx(0.0));
  CHECK(g.is_nyquist(Axis::x, 2));
}

TEST_CASE("full-resolution line-wave grid") {
  const TorusGrid g = make_grid_2d(4096, 128, 10.0, 3.0);
  const auto x = g.nodes(Axis::x);
  const auto y = g.nodes(Axis::y);
  CHECK(x.front() == doctest::Approx(-10.0 * pi + 20.0 * pi / 4096).epsilon(1e-14));
  CHECK(x.back() == doctest::Approx(10.0 * pi).epsilon(1e-14));
  CHECK(y.front() == doctest::Approx(-3.0 * pi + 6.0 * pi / 128).epsilon(1e-14));
  CHECK(y.back() == doctest::Approx(3.0 * pi).epsilon(1e-14));
  CHECK(g.spacing(Axis::x) == doctest::Approx(2.0 * pi * 10.0 / 4096));
  for (std::size_t i = 1; i < x.size(); ++i) {
    REQUIRE(x[i] - x[i - 1] == doctest::Approx(g.spacing(Axis::x)).epsilon(1e-10));
  }
  CHECK(g.max_wavenumber(Axis::x) == doctest::Approx(2047.0 / 10.0));
  CHECK(g.max_wavenumber(Axis::y) == doctest::Approx(63.0 / 3.0));
  CHECK(g.domain_measure() == doctest::Approx(4.0 * pi * pi * 30.0));
}

TEST_CASE("grid sizing and scale errors") {
  CHECK_THROWS_AS(make_grid_1d(6, 1.0), GridError);
  CHECK_THROWS_AS(make_grid_1d(0, 1.0), GridError);
  CHECK_THROWS_AS(make_grid_2d(64, 48, 1.0, 1.0), GridError);
  CHECK_THROWS_AS(make_grid_1d(64, 0.0), GridError);
  CHECK_THROWS_AS(make_grid_2d(64, 64, 1.0, -1.0), GridError);
  CHECK_THROWS_AS(make_grid(2, 64, std::nullopt, 1.0, std::nullopt), GridError);
}

TEST_CASE("forward coefficients agree with a direct DFT sum") {
  const TorusGrid g = make_grid_2d(16, 8, 1.3, 0.7);
  const auto f = oracle::band_limited(16, 8, 1.3, 0.7, 3, 11);
  const SpectralField s = SpectralField::from_physical(g, f);
  for (long my = -3; my <= 3; ++my) {
    for (long mx = -5; mx <= 5; ++mx) {
      const auto ref = oracle::dft_coefficient(f, 16, 8, mx, my);
      REQUIRE(std::abs(s.mode(mx, my) - ref) < 1e-14);
    }
  }
}

TEST_CASE("round trip and Hermitian symmetry") {
  const TorusGrid g = make_grid_2d(64, 32, 2.0, 1.0);
  const auto f = oracle::band_limited(64, 32, 2.0, 1.0, 12, 3);
  const SpectralField s = SpectralField::from_physical(g, f);
  CHECK(oracle::max_abs_diff(s.physical(), f) < 1e-13 * oracle::max_abs(f));
  for (long my = 1; my < 16; ++my) {
    REQUIRE(std::abs(s.mode(0, my) - std::conj(s.mode(0, -my))) < 1e-15);
  }
  CHECK(std::abs(s.mode(0, 0).imag()) < 1e-16);
}

TEST_CASE("derivative of sin is cos; constants differentiate to zero") {
  const TorusGrid g = make_grid_1d(64, 1.0);
  const auto f = sample(g, [](double x, double) { return std::sin(x); });
  const auto d = spectral_derivative(SpectralField::from_physical(g, f), Axis::x, 1);
  const auto ref = sample(g, [](double x, double) { return std::cos(x); });
  CHECK(oracle::max_abs_diff(d.physical(), ref) < 1e-12);

  const std::vector<double> one(64, 3.5);
  const auto z = spectral_derivative(SpectralField::from_physical(g, one), Axis::x, 1);
  for (double v : z.physical()) REQUIRE(v == 0.0);
}

TEST_CASE("Gaussian derivative on a long domain") {
  const TorusGrid g = make_grid_1d(1024, 10.0);
  const auto f = sample(g, [](double x, double) { return std::exp(-x * x); });
  const auto fs = SpectralField::from_physical(g, f);
  const auto d1 = spectral_derivative(fs, Axis::x, 1);
  const auto d2 = spectral_derivative(fs, Axis::x, 2);
  const auto r1 = sample(g, [](double x, double) { return -2.0 * x * std::exp(-x * x); });
  const auto r2 = sample(g, [](double x, double) { return (4.0 * x * x - 2.0) * std::exp(-x * x); });
  CHECK(oracle::max_abs_diff(d1.physical(), r1) < 1e-10);
  CHECK(oracle::max_abs_diff(d2.physical(), r2) < 1e-10);
}

TEST_CASE("mixed partial derivatives in 2D") {
  const TorusGrid g = make_grid_2d(64, 64, 1.0, 1.0);
  const auto f = sample(g, [](double x, double y) { return std::exp(std::sin(x) + std::cos(2.0 * y)); });
  const auto fs = SpectralField::from_physical(g, f);
  const auto dxy = spectral_derivative(spectral_derivative(fs, Axis::x, 1), Axis::y, 1);
  const auto ref = sample(g, [](double x, double y) {
    return -2.0 * std::cos(x) * std::sin(2.0 * y) * std::exp(std::sin(x) + std::cos(2.0 * y));
  });
  CHECK(oracle::max_abs_diff(dxy.physical(), ref) < 1e-10);
  CHECK_THROWS(spectral_derivative(fs, Axis::x, 3));
  CHECK_THROWS(spectral_derivative(SpectralField::from_physical(make_grid_1d(8, 1.0), std::vector<double>(8)),
                                   Axis::y, 1));
}

TEST_CASE("Helmholtz inversion") {
  SUBCASE("identity at zero dispersion") {
    const TorusGrid g = make_grid_2d(32, 16, 1.0, 2.0);
    const auto f = oracle::band_limited(32, 16, 1.0, 2.0, 5, 7);
    const auto fs = SpectralField::from_physical(g, f);
    const auto h = helmholtz_inverse(fs, 0.0);
    for (std::size_t n = 0; n < fs.coefficients().size(); ++n) {
      REQUIRE(h.coefficients()[n] == fs.coefficients()[n]);
    }
  }
  SUBCASE("cos x and cos x cos y") {
    const TorusGrid g1 = make_grid_1d(64, 1.0);
    const auto c1 = sample(g1, [](double x, double) { return std::cos(x); });
    const auto r1 = sample(g1, [](double x, double) { return std::cos(x) / 2.0; });
    CHECK(oracle::max_abs_diff(oracle::values(helmholtz_inverse(SpectralField::from_physical(g1, c1), 1.0)), r1) <
          1e-14);
    const TorusGrid g2 = make_grid_2d(32, 32, 1.0, 1.0);
    const auto c2 = sample(g2, [](double x, double y) { return std::cos(x) * std::cos(y); });
    const auto r2 = sample(g2, [](double x, double y) { return std::cos(x) * std::cos(y) / 3.0; });
    CHECK(oracle::max_abs_diff(oracle::values(helmholtz_inverse(SpectralField::from_physical(g2, c2), 1.0)), r2) <
          1e-14);
  }
  SUBCASE("inverse of (1 - eps Laplacian)") {
    const TorusGrid g = make_grid_2d(64, 64, 1.5, 1.5);
    const auto f = oracle::band_limited(64, 64, 1.5, 1.5, 10, 5);
    const auto fs = SpectralField::from_physical(g, f);
    const double eps = 0.3;
    const auto h = helmholtz_inverse(fs, eps);
    const auto lap = [&](const SpectralField& u) {
      const auto a = oracle::values(spectral_derivative(u, Axis::x, 2));
      const auto b = oracle::values(spectral_derivative(u, Axis::y, 2));
      std::vector<double> out(a.size());
      for (std::size_t n = 0; n < a.size(); ++n) out[n] = a[n] + b[n];
      return out;
    };
    const auto lh = lap(h);
    std::vector<double> back(f.size());
    for (std::size_t n = 0; n < f.size(); ++n) back[n] = h.physical()[n] - eps * lh[n];
    CHECK(oracle::max_abs_diff(back, f) < 1e-12 * oracle::max_abs(f));
  }
  CHECK_THROWS(helmholtz_inverse(SpectralField(make_grid_1d(8, 1.0)), -1.0));
}

TEST_CASE("norm functionals") {
  const TorusGrid g = make_grid_1d(64, 1.0);
  const auto s = SpectralField::from_physical(g, sample(g, [](double x, double) { return std::sin(x); }));
  CHECK(norm_functional(s, NormKind::l2) == doctest::Approx(std::sqrt(pi)).epsilon(1e-14));
  CHECK(norm_functional(s, NormKind::l4) == doctest::Approx(std::pow(3.0 * pi / 4.0, 0.25)).epsilon(1e-14));
  CHECK(norm_functional(s, NormKind::linf) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(norm_functional(s, NormKind::h1_seminorm) == doctest::Approx(std::sqrt(pi)).epsilon(1e-14));
  CHECK(parseval_l2(s) == doctest::Approx(std::sqrt(pi)).epsilon(1e-14));

  const TorusGrid gl = make_grid_1d(512, 3.0);
  const auto gauss = SpectralField::from_physical(gl, sample(gl, [](double x, double) { return std::exp(-x * x); }));
  CHECK(norm_functional(gauss, NormKind::l2) == doctest::Approx(std::pow(pi / 2.0, 0.25)).epsilon(1e-12));

  CHECK(lp_norm_kind(2) == NormKind::l2);
  CHECK(lp_norm_kind(4) == NormKind::l4);
  CHECK(lp_norm_kind(INFINITY) == NormKind::linf);
  CHECK_THROWS_AS(lp_norm_kind(3), std::invalid_argument);
}

TEST_CASE("Parseval and quadrature agree on band-limited fields") {
  for (unsigned seed = 1; seed <= 4; ++seed) {
    const TorusGrid g = make_grid_2d(64, 32, 1.7, 0.9);
    const auto f = oracle::band_limited(64, 32, 1.7, 0.9, 9, seed);
    const auto s = SpectralField::from_physical(g, f);
    double q = 0.0;
    for (double v : f) q += v * v;
    q = std::sqrt(q * g.cell_measure());
    REQUIRE(parseval_l2(s) == doctest::Approx(q).epsilon(1e-12));
    REQUIRE(norm_functional(s, NormKind::l2) == doctest::Approx(q).epsilon(1e-12));

    const auto dx = oracle::values(spectral_derivative(s, Axis::x, 1));
    const auto dy = oracle::values(spectral_derivative(s, Axis::y, 1));
    double h = 0.0;
    for (std::size_t n = 0; n < f.size(); ++n) h += dx[n] * dx[n] + dy[n] * dy[n];
    h = std::sqrt(h * g.cell_measure());
    REQUIRE(norm_functional(s, NormKind::h1_seminorm) == doctest::Approx(h).epsilon(1e-10));
  }
}

TEST_CASE("derivative output is real: full-spectrum inverse has no imaginary part") {
  const TorusGrid g = make_grid_1d(32, 1.0);
  const auto f = oracle::band_limited(32, 1, 1.0, 1.0, 15, 9);
  const auto d = spectral_derivative(SpectralField::from_physical(g, f), Axis::x, 1);
  const auto x = g.nodes(Axis::x);
  double worst = 0.0;
  for (std::size_t i = 0; i < 32; ++i) {
    std::complex<double> acc = 0.0;
    for (long m = -15; m <= 16; ++m) acc += d.mode(m) * std::polar(1.0, static_cast<double>(m) * x[i]);
    worst = std::max(worst, std::abs(acc.imag()));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("two-thirds truncation zeros the upper third only") {
  const TorusGrid g = make_grid_1d(64, 1.0);
  const auto f = oracle::band_limited(64, 1, 1.0, 1.0, 31, 2);
  auto s = SpectralField::from_physical(g, f);
  auto c = s.mutable_coefficients();
  const std::vector<std::complex<double>> before(c.begin(), c.end());
  dealias_two_thirds(g, c);
  for (long m = 0; m <= 32; ++m) {
    const bool kept = 3 * m < 64;
    if (kept) {
      REQUIRE(s.mode(m) == before[static_cast<std::size_t>(m)]);
    } else {
      REQUIRE(s.mode(m) == std::complex<double>(0.0));
    }
  }
}

}
