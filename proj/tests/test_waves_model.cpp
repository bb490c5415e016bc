#include <doctest.h>

#include <cmath>

#include "asbq/model.hpp"
#include "asbq/spectral.hpp"
#include "oracles.hpp"

using namespace asbq;

namespace {

template <class F>
void fill(const TorusGrid& g, std::span<double> out, F&& f) {
  const auto x = g.nodes(Axis::x);
  for (std::size_t j = 0; j < g.ny(); ++j) {
    const double y = g.is_1d() ? 0.0 : g.nodes(Axis::y)[j];
    for (std::size_t i = 0; i < g.nx(); ++i) out[j * g.nx() + i] = f(x[i], y);
  }
}

}  // namespace

TEST_SUITE("waves_model") {

TEST_CASE("rest and constant elevation are steady") {
  const TorusGrid g = make_grid_2d(32, 32, 1.0, 1.0);
  const ModelParams p = ModelParams::boussinesq(1.0);
  WaveState s = WaveState::rest(g);
  auto r = rhs_2d(s, p);
  CHECK(oracle::max_abs(r.eta) == 0.0);
  CHECK(oracle::max_abs(r.vx) == 0.0);
  CHECK(oracle::max_abs(r.vy) == 0.0);
  std::fill(s.eta.begin(), s.eta.end(), 0.37);
  r = rhs_2d(s, p);
  CHECK(oracle::max_abs(r.eta) < 1e-15);
  CHECK(oracle::max_abs(r.vx) < 1e-15);
  CHECK(oracle::max_abs(r.vy) < 1e-15);
}

TEST_CASE("cosine elevation drives a halved sine velocity") {
  const double a = 0.2;
  const TorusGrid g = make_grid_2d(32, 16, 1.0, 1.0);
  WaveState s = WaveState::rest(g);
  fill(g, s.eta, [&](double x, double) { return a * std::cos(x); });
  const auto r = rhs_2d(s, ModelParams::boussinesq(1.0));
  std::vector<double> ref(g.size());
  fill(g, ref, [&](double x, double) { return a * std::sin(x) / 2.0; });
  CHECK(oracle::max_abs(r.eta) < 1e-15);
  CHECK(oracle::max_abs_diff(r.vx, ref) < 1e-15);
  CHECK(oracle::max_abs(r.vy) < 1e-15);
}

TEST_CASE("one-dimensional tendency against a finite-difference solve") {
  const std::size_t n = 4096;
  const double l = 4.0;
  const TorusGrid g = make_grid_1d(n, l);
  WaveState s = WaveState::rest(g);
  fill(g, s.eta, [](double x, double) { return std::exp(-x * x); });
  const auto r = rhs_1d(s, ModelParams::boussinesq(1.0));

  const double h = g.spacing(Axis::x);
  const auto x = g.nodes(Axis::x);
  std::vector<double> a(n, -1.0 / (h * h)), b(n, 1.0 + 2.0 / (h * h)), c(n, -1.0 / (h * h)), d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = 2.0 * x[i] * std::exp(-x[i] * x[i]);
  const auto fd = oracle::tridiagonal_solve(a, b, c, d);
  CHECK(oracle::max_abs_diff(r.vx, fd) < 1e-4);
  CHECK(oracle::max_abs(r.eta) == 0.0);
}

TEST_CASE("y-independent 2D state reduces to the 1D system") {
  const TorusGrid g1 = make_grid_1d(128, 2.0);
  const TorusGrid g2 = make_grid_2d(128, 8, 2.0, 1.0);
  const ModelParams p = ModelParams::boussinesq(0.7);
  WaveState s1 = WaveState::rest(g1);
  WaveState s2 = WaveState::rest(g2);
  auto eta = [](double x, double) { return 0.4 * std::exp(-x * x) + 0.1 * std::cos(x / 2.0); };
  auto v = [](double x, double) { return 0.3 * std::sin(x / 2.0) * std::exp(-0.5 * x * x); };
  fill(g1, s1.eta, eta);
  fill(g1, s1.vx, v);
  fill(g2, s2.eta, eta);
  fill(g2, s2.vx, v);
  const auto r1 = rhs_1d(s1, p);
  const auto r2 = rhs_2d(s2, p);
  for (std::size_t j = 0; j < 8; ++j) {
    for (std::size_t i = 0; i < 128; ++i) {
      REQUIRE(std::abs(r2.eta[j * 128 + i] - r1.eta[i]) < 1e-12);
      REQUIRE(std::abs(r2.vx[j * 128 + i] - r1.vx[i]) < 1e-12);
      REQUIRE(std::abs(r2.vy[j * 128 + i]) < 1e-12);
    }
  }
  CHECK_THROWS(rhs_1d(s2, p));
  CHECK_THROWS(rhs_2d(s1, p));
}

TEST_CASE("two-mode products match the closed-form tendency") {
  const double A = 0.3, B = 0.2;
  SUBCASE("1D: eta = A cos x, v = B cos 2x") {
    const double eps = 0.6;
    const TorusGrid g = make_grid_1d(16, 1.0);
    WaveState s = WaveState::rest(g);
    fill(g, s.eta, [&](double x, double) { return A * std::cos(x); });
    fill(g, s.vx, [&](double x, double) { return B * std::cos(2.0 * x); });
    const auto r = rhs_1d(s, ModelParams::boussinesq(eps));
    std::vector<double> eta_t(16), v_t(16);
    fill(g, eta_t, [&](double x, double) {
      return 2.0 * B * std::sin(2.0 * x) + eps * A * B / 2.0 * (std::sin(x) + 3.0 * std::sin(3.0 * x));
    });
    fill(g, v_t, [&](double x, double) {
      return A * std::sin(x) / (1.0 + eps) + eps * B * B * std::sin(4.0 * x) / (1.0 + 16.0 * eps);
    });
    CHECK(oracle::max_abs_diff(r.eta, eta_t) < 1e-15);
    CHECK(oracle::max_abs_diff(r.vx, v_t) < 1e-15);
  }
  SUBCASE("2D: eta = A cos x, v = (0, B cos y)") {
    const double eps = 1.0;
    const TorusGrid g = make_grid_2d(16, 16, 1.0, 1.0);
    WaveState s = WaveState::rest(g);
    fill(g, s.eta, [&](double x, double) { return A * std::cos(x); });
    fill(g, s.vy, [&](double, double y) { return B * std::cos(y); });
    const auto r = rhs_2d(s, ModelParams::boussinesq(eps));
    std::vector<double> eta_t(g.size()), vx_t(g.size()), vy_t(g.size());
    fill(g, eta_t, [&](double x, double y) { return B * std::sin(y) + eps * A * B * std::cos(x) * std::sin(y); });
    fill(g, vx_t, [&](double x, double) { return A * std::sin(x) / (1.0 + eps); });
    fill(g, vy_t, [&](double, double y) { return eps * B * B / 2.0 * std::sin(2.0 * y) / (1.0 + 4.0 * eps); });
    CHECK(oracle::max_abs_diff(r.eta, eta_t) < 1e-15);
    CHECK(oracle::max_abs_diff(r.vx, vx_t) < 1e-15);
    CHECK(oracle::max_abs_diff(r.vy, vy_t) < 1e-15);
  }
}

TEST_CASE("tendency is mean free and curl free") {
  const TorusGrid g = make_grid_2d(64, 64, 1.0, 1.0);
  const ModelParams p = ModelParams::boussinesq(0.5);
  WaveState s = WaveState::rest(g);
  const auto eta = oracle::band_limited(64, 64, 1.0, 1.0, 8, 21);
  // Gradient velocity field v = grad(phi) is irrotational.
  const auto phi = SpectralField::from_physical(g, oracle::band_limited(64, 64, 1.0, 1.0, 8, 22));
  const auto phx = oracle::values(spectral_derivative(phi, Axis::x, 1));
  const auto phy = oracle::values(spectral_derivative(phi, Axis::y, 1));
  for (std::size_t n = 0; n < g.size(); ++n) {
    s.eta[n] = 0.2 * eta[n];
    s.vx[n] = 0.2 * phx[n];
    s.vy[n] = 0.2 * phy[n];
  }
  const auto r = rhs_2d(s, p);
  const auto te = SpectralField::from_physical(g, r.eta);
  const auto tx = SpectralField::from_physical(g, r.vx);
  const auto ty = SpectralField::from_physical(g, r.vy);
  CHECK(std::abs(te.mode(0, 0)) < 1e-15);
  CHECK(std::abs(tx.mode(0, 0)) < 1e-15);
  CHECK(std::abs(ty.mode(0, 0)) < 1e-15);
  const auto cx = oracle::values(spectral_derivative(ty, Axis::x, 1));
  const auto cy = oracle::values(spectral_derivative(tx, Axis::y, 1));
  std::vector<double> curl(g.size());
  for (std::size_t n = 0; n < g.size(); ++n) curl[n] = cx[n] - cy[n];
  CHECK(parseval_l2(SpectralField::from_physical(g, curl)) < 1e-12);
}

TEST_CASE("spectral evaluator agrees with the physical-space entry points") {
  const TorusGrid g = make_grid_2d(32, 16, 1.0, 0.5);
  const ModelParams p = ModelParams::boussinesq(0.8);
  WaveState s = WaveState::rest(g);
  const auto a = oracle::band_limited(32, 16, 1.0, 0.5, 5, 31);
  const auto b = oracle::band_limited(32, 16, 1.0, 0.5, 5, 32);
  const auto c = oracle::band_limited(32, 16, 1.0, 0.5, 5, 33);
  for (std::size_t n = 0; n < g.size(); ++n) {
    s.eta[n] = 0.1 * a[n];
    s.vx[n] = 0.1 * b[n];
    s.vy[n] = 0.1 * c[n];
  }
  TendencyEvaluator ev(g, p);
  SpectralState out;
  ev(ev.to_spectral(s), out);
  const WaveState back = ev.to_physical(out, 0.0);
  const auto r = rhs_2d(s, p);
  CHECK(oracle::max_abs_diff(back.eta, r.eta) < 1e-14);
  CHECK(oracle::max_abs_diff(back.vx, r.vx) < 1e-14);
  CHECK(oracle::max_abs_diff(back.vy, r.vy) < 1e-14);
}

TEST_CASE("cavitation indicator") {
  const TorusGrid g = make_grid_1d(32, 1.0);
  WaveState s = WaveState::rest(g);
  CHECK(cavitation_indicator(s, ModelParams::boussinesq(1.0)) == 1.0);
  fill(g, s.eta, [](double x, double) { return -std::exp(-x * x); });
  CHECK(cavitation_indicator(s, ModelParams::boussinesq(1.0)) == doctest::Approx(0.0).epsilon(1e-15));
  fill(g, s.eta, [](double x, double) { return -1.5 * std::exp(-x * x); });
  CHECK(cavitation_indicator(s, ModelParams::boussinesq(1.0)) == doctest::Approx(-0.5));
  CHECK(cavitation_indicator(s, ModelParams::boussinesq(0.5)) == doctest::Approx(0.25));
}

TEST_CASE("parameter and shape validation") {
  CHECK_THROWS(ModelParams{1.0, 0.0}.validate());
  CHECK_THROWS(ModelParams{-1.0, 1.0}.validate());
  CHECK_NOTHROW(ModelParams{0.0, 1.0}.validate());
  const TorusGrid g = make_grid_1d(32, 1.0);
  WaveState s = WaveState::rest(g);
  s.eta.resize(31);
  CHECK_THROWS(s.validate());
  CHECK(parse_field("vy") == Field::vy);
  CHECK_THROWS(parse_field("w"));
}

}
