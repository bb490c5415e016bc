#include "asbq/solitary.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>
#include <vector>

#include "asbq/binary_io.hpp"
#include "asbq/spectral.hpp"

namespace asbq {

namespace {

using Vec = std::vector<double>;

void check_speed(double c, double eps) {
  if (!(c > 1.0)) {
    throw std::invalid_argument("solitary waves exist only for c > 1 (got c = " +
                                std::to_string(c) + ")");
  }
  if (!(eps > 0.0)) throw std::invalid_argument("solitary waves need eps > 0");
}

void check_1d(const TorusGrid& g) {
  if (!g.is_1d()) throw std::invalid_argument("profile grid must be one-dimensional");
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

/// Index of the node at -x_i.
std::size_t mirror(std::size_t i, std::size_t n) { return (2 * n - i - 2) % n; }

template <class V>
void symmetrize(V& v) {
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t m = mirror(i, n);
    if (m <= i) continue;
    const double avg = 0.5 * (v[i] + v[m]);
    v[i] = avg;
    v[m] = avg;
  }
}

double dot(const Vec& a, const Vec& b) { return std::inner_product(a.begin(), a.end(), b.begin(), 0.0); }

/// Newton-GMRES for R(V) = 0 at fixed c on one grid.
class ProfileNewton {
 public:
  ProfileNewton(double c, double eps, const TorusGrid& g, const ProfileSolverOptions& o)
      : c_(c), eps_(eps), g_(g), o_(o), n_(g.size()), spec_(g.spectral_size()),
        work_c_(g.spectral_size()), work_r_(g.size()), diag_(g.size()) {
    // Spectral V'' amplifies round-off by eps c k_max^2; no residual below that is attainable.
    const double kmax = g.max_wavenumber(Axis::x);
    tolerance_ = std::max(o.tolerance, std::numeric_limits<double>::epsilon() * eps * c * kmax * kmax);
  }

  struct Outcome {
    bool converged = false;
    int iterations = 0;
    double residual = 0.0;
  };

  Outcome solve(RealArray& V) {
    Outcome out;
    RealArray R = residual(V);
    double rnorm = max_abs(R);
    for (int it = 0; it < o_.max_newton; ++it) {
      const double vmax = max_abs(V);
      out.iterations = it;
      out.residual = rnorm;
      if (vmax > 0.0 && rnorm <= tolerance_ * vmax) {
        out.converged = true;
        return out;
      }
      set_jacobian_diagonal(V);
      Vec rhs(n_);
      for (std::size_t i = 0; i < n_; ++i) rhs[i] = -R[i];
      Vec delta = gmres(rhs);
      // Damped update: halve the step until the residual decreases and the
      // pole condition eps V < c holds.
      double lambda = 1.0;
      bool accepted = false;
      for (int ls = 0; ls < 30; ++ls) {
        RealArray trial(V);
        for (std::size_t i = 0; i < n_; ++i) trial[i] += lambda * delta[i];
        symmetrize(trial);
        if (pole_free(trial)) {
          RealArray Rt = residual(trial);
          const double rt = max_abs(Rt);
          if (std::isfinite(rt) && (rt < rnorm || ls == 29)) {
            V = std::move(trial);
            R = std::move(Rt);
            rnorm = rt;
            accepted = true;
            break;
          }
        }
        lambda *= 0.5;
      }
      if (!accepted) break;
    }
    out.residual = rnorm;
    const double vmax = max_abs(V);
    out.converged = vmax > 0.0 && rnorm <= tolerance_ * vmax;
    return out;
  }

  RealArray residual(std::span<const double> V) {
    RealArray R(n_);
    g_.transform().forward(V, spec_);
    second_derivative_to(work_r_);
    for (std::size_t i = 0; i < n_; ++i) {
      const double v = V[i];
      R[i] = eps_ * c_ * work_r_[i] - c_ * v + 0.5 * eps_ * v * v + v / (c_ - eps_ * v);
    }
    return R;
  }

  bool pole_free(std::span<const double> V) const {
    return std::all_of(V.begin(), V.end(), [&](double v) { return eps_ * v < c_; });
  }

 private:
  double tolerance_ = 0.0;
  void second_derivative_to(RealArray& out) {
    const auto k = g_.wavenumbers(Axis::x);
    for (std::size_t i = 0; i < spec_.size(); ++i) work_c_[i] = -k[i] * k[i] * spec_[i];
    g_.transform().inverse_destructive(work_c_, out);
  }

  void set_jacobian_diagonal(std::span<const double> V) {
    for (std::size_t i = 0; i < n_; ++i) {
      const double den = c_ - eps_ * V[i];
      diag_[i] = -c_ + eps_ * V[i] + c_ / (den * den);
    }
  }

  double preconditioner_symbol(double k) const { return -eps_ * c_ * k * k - c_ + 1.0 / c_; }

  /// y = P^-1 u, the actual Newton correction for a GMRES iterate.
  Vec apply_preconditioner(const Vec& u) {
    RealArray tmp(u.begin(), u.end());
    g_.transform().forward(tmp, spec_);
    const auto k = g_.wavenumbers(Axis::x);
    for (std::size_t i = 0; i < spec_.size(); ++i) spec_[i] /= preconditioner_symbol(k[i]);
    g_.transform().inverse(spec_, tmp);
    return Vec(tmp.begin(), tmp.end());
  }

  /// y = S J P^-1 S u with J = eps c d_xx + diag and S the even projection.
  /// Projecting the input too keeps odd round-off out of the Krylov space;
  /// otherwise the operator has an odd null space GMRES can wander into.
  Vec apply_operator(const Vec& u) {
    RealArray tmp(u.begin(), u.end());
    symmetrize(tmp);
    g_.transform().forward(tmp, spec_);
    const auto k = g_.wavenumbers(Axis::x);
    for (std::size_t i = 0; i < spec_.size(); ++i) spec_[i] /= preconditioner_symbol(k[i]);
    RealArray w(n_);
    g_.transform().inverse(spec_, w);
    second_derivative_to(work_r_);
    Vec y(n_);
    for (std::size_t i = 0; i < n_; ++i) y[i] = eps_ * c_ * work_r_[i] + diag_[i] * w[i];
    symmetrize(y);
    return y;
  }

  /// Restarted GMRES with Givens rotations for J P^-1 u = b; returns P^-1 u.
  Vec gmres(const Vec& b) {
    const int m = o_.krylov_restart;
    Vec r = b;
    symmetrize(r);
    const double bnorm = std::sqrt(dot(r, r));
    Vec x(n_, 0.0);
    if (bnorm == 0.0) return x;
    const Vec even_b = r;
    int total = 0;
    while (total < o_.max_krylov) {
      const double beta = std::sqrt(dot(r, r));
      if (beta <= o_.krylov_tolerance * bnorm) break;
      std::vector<Vec> basis;
      basis.reserve(static_cast<std::size_t>(m) + 1);
      basis.emplace_back(r);
      for (double& v : basis[0]) v /= beta;
      std::vector<std::vector<double>> h(static_cast<std::size_t>(m) + 1,
                                         std::vector<double>(static_cast<std::size_t>(m), 0.0));
      std::vector<double> cs(static_cast<std::size_t>(m)), sn(static_cast<std::size_t>(m));
      std::vector<double> s(static_cast<std::size_t>(m) + 1, 0.0);
      s[0] = beta;
      int j = 0;
      for (; j < m && total < o_.max_krylov; ++j, ++total) {
        const auto ju = static_cast<std::size_t>(j);
        Vec w = apply_operator(basis[ju]);
        for (std::size_t i = 0; i <= ju; ++i) {
          h[i][ju] = dot(w, basis[i]);
          for (std::size_t q = 0; q < n_; ++q) w[q] -= h[i][ju] * basis[i][q];
        }
        h[ju + 1][ju] = std::sqrt(dot(w, w));
        for (std::size_t i = 0; i < ju; ++i) {
          const double t = cs[i] * h[i][ju] + sn[i] * h[i + 1][ju];
          h[i + 1][ju] = -sn[i] * h[i][ju] + cs[i] * h[i + 1][ju];
          h[i][ju] = t;
        }
        const double rho = std::hypot(h[ju][ju], h[ju + 1][ju]);
        cs[ju] = rho == 0.0 ? 1.0 : h[ju][ju] / rho;
        sn[ju] = rho == 0.0 ? 0.0 : h[ju + 1][ju] / rho;
        const double hn = h[ju + 1][ju];
        h[ju][ju] = rho;
        h[ju + 1][ju] = 0.0;
        s[ju + 1] = -sn[ju] * s[ju];
        s[ju] = cs[ju] * s[ju];
        if (hn > 0.0) {
          basis.emplace_back(std::move(w));
          for (double& v : basis.back()) v /= hn;
        }
        if (std::abs(s[ju + 1]) <= o_.krylov_tolerance * bnorm || hn == 0.0) {
          ++j;
          ++total;
          break;
        }
      }
      // Back substitution on the j-by-j triangle.
      std::vector<double> yv(static_cast<std::size_t>(j), 0.0);
      for (int i = j - 1; i >= 0; --i) {
        const auto iu = static_cast<std::size_t>(i);
        double acc = s[iu];
        for (std::size_t q = iu + 1; q < static_cast<std::size_t>(j); ++q) acc -= h[iu][q] * yv[q];
        yv[iu] = acc / h[iu][iu];
      }
      for (std::size_t i = 0; i < static_cast<std::size_t>(j); ++i) {
        for (std::size_t q = 0; q < n_; ++q) x[q] += yv[i] * basis[i][q];
      }
      Vec ax = apply_operator(x);
      for (std::size_t q = 0; q < n_; ++q) r[q] = even_b[q] - ax[q];
    }
    symmetrize(x);
    return apply_preconditioner(x);
  }

  double c_, eps_;
  const TorusGrid& g_;
  const ProfileSolverOptions& o_;
  std::size_t n_;
  ComplexArray spec_, work_c_;
  RealArray work_r_, diag_;
};

RealArray sech2_seed(const TorusGrid& g, double c, double eps) {
  const double lambda = std::sqrt((c * c - 1.0) / (eps * c * c));
  const double a0 = std::min((c - 1.0 / c) * 1.5 / eps, 0.9 * c / eps);
  RealArray v(g.size());
  const auto x = g.nodes(Axis::x);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double s = 1.0 / std::cosh(0.5 * lambda * x[i]);
    v[i] = a0 * s * s;
  }
  return v;
}

void center_on_origin(RealArray& v, const TorusGrid& g) {
  const auto it = std::max_element(v.begin(), v.end());
  const auto imax = static_cast<std::size_t>(std::distance(v.begin(), it));
  const std::size_t i0 = g.origin_index(Axis::x);
  if (imax == i0) return;
  const auto x = g.nodes(Axis::x);
  v = shifted_profile(v, g, x[imax] - x[i0]);
  symmetrize(v);
}

SolitaryProfile finish(double c, double eps, const TorusGrid& g, RealArray V, int iterations,
                       double residual) {
  RealArray Q(V.size());
  for (std::size_t i = 0; i < V.size(); ++i) Q[i] = V[i] / (c - eps * V[i]);
  return SolitaryProfile{c, eps, g, std::move(Q), std::move(V), residual, iterations, {}, {}};
}

}  // namespace

double SolitaryProfile::amplitude() const { return Q.empty() ? 0.0 : *std::max_element(Q.begin(), Q.end()); }

double SolitaryProfile::tail_rate() const { return std::sqrt((c * c - 1.0) / (eps * c * c)); }

RealArray profile_residual(std::span<const double> V, double c, double eps, const TorusGrid& g) {
  check_speed(c, eps);
  check_1d(g);
  if (V.size() != g.size()) throw std::invalid_argument("profile_residual: size mismatch");
  const auto worst = std::max_element(V.begin(), V.end());
  if (worst != V.end() && eps * *worst >= c) {
    const auto i = static_cast<std::size_t>(std::distance(V.begin(), worst));
    std::ostringstream msg;
    msg << "profile pole: eps*V = " << eps * *worst << " >= c = " << c << " at x = "
        << g.nodes(Axis::x)[i] << " (node " << i << ")";
    throw ProfileError(msg.str());
  }
  ProfileSolverOptions o;
  ProfileNewton newton(c, eps, g, o);
  return newton.residual(V);
}

SolitaryProfile solve_profile(double c, double eps, const TorusGrid& g,
                              std::optional<std::span<const double>> seed,
                              const ProfileSolverOptions& o) {
  check_speed(c, eps);
  check_1d(g);
  const double lambda = std::sqrt((c * c - 1.0) / (eps * c * c));
  std::vector<std::string> warnings;
  if (std::exp(-lambda * std::numbers::pi * g.lx()) > 1e-10) {
    std::ostringstream w;
    w << "domain half-length " << std::numbers::pi * g.lx() << " leaves a tail of "
      << std::exp(-lambda * std::numbers::pi * g.lx())
      << " at the boundary; the profile is the periodic wave, not the solitary wave";
    warnings.push_back(w.str());
  }

  RealArray V;
  if (seed) {
    if (seed->size() != g.size()) throw std::invalid_argument("profile seed size mismatch");
    V.assign(seed->begin(), seed->end());
  } else {
    V = sech2_seed(g, c, eps);
  }
  symmetrize(V);

  auto attempt = [&](double speed, RealArray& v) {
    ProfileNewton newton(speed, eps, g, o);
    return newton.pole_free(v) ? newton.solve(v) : ProfileNewton::Outcome{};
  };

  RealArray direct = V;
  auto out = attempt(c, direct);
  if (out.converged && max_abs(direct) > 1e-8) {
    center_on_origin(direct, g);
    auto p = finish(c, eps, g, std::move(direct), out.iterations, out.residual);
    p.warnings = std::move(warnings);
    return p;
  }

  // Continuation from near the existence threshold.
  std::vector<double> path;
  double speed = std::min(o.continuation_start, 0.5 * (1.0 + c));
  RealArray v = sech2_seed(g, speed, eps);
  double step = o.continuation_step;
  RealArray last_good;
  double last_speed = 0.0;
  while (true) {
    RealArray trial = last_good.empty() ? v : last_good;
    auto res = attempt(speed, trial);
    if (res.converged && max_abs(trial) > 1e-8) {
      path.push_back(speed);
      last_good = std::move(trial);
      last_speed = speed;
      if (speed == c) {
        center_on_origin(last_good, g);
        auto p = finish(c, eps, g, std::move(last_good), res.iterations, res.residual);
        p.continuation_path = std::move(path);
        p.warnings = std::move(warnings);
        return p;
      }
      speed = std::min(c, speed + step);
    } else {
      if (last_good.empty() || step < 1e-4) {
        throw ProfileError("solitary profile construction failed at c = " + std::to_string(speed) +
                           " (last residual " + std::to_string(res.residual) + ")");
      }
      step *= 0.5;
      speed = std::min(c, last_speed + step);
    }
  }
}

RealArray shifted_profile(std::span<const double> values, const TorusGrid& g, double shift) {
  check_1d(g);
  if (values.size() != g.size()) throw std::invalid_argument("shifted_profile: size mismatch");
  if (shift == 0.0) return RealArray(values.begin(), values.end());
  ComplexArray c(g.spectral_size());
  g.transform().forward(values, c);
  const auto k = g.wavenumbers(Axis::x);
  for (std::size_t i = 0; i < c.size(); ++i) {
    // The Nyquist term of a real field is a cosine; shifting it would need a
    // sine partner the grid cannot carry, so it is kept only at its real part.
    if (g.is_nyquist(Axis::x, i)) {
      c[i] = Complex(c[i].real() * std::cos(k[i] * shift), 0.0);
    } else {
      c[i] *= std::polar(1.0, k[i] * shift);
    }
  }
  RealArray out(g.size());
  g.transform().inverse_destructive(c, out);
  return out;
}

WaveState line_extend(const SolitaryProfile& p, const TorusGrid& g2) {
  if (g2.is_1d()) throw std::invalid_argument("line_extend needs a 2D grid");
  if (g2.nx() != p.grid.nx() || g2.lx() != p.grid.lx()) {
    throw std::invalid_argument("line_extend: 2D grid x-extent differs from the profile grid");
  }
  WaveState s = WaveState::rest(g2);
  const std::size_t nx = g2.nx();
  for (std::size_t j = 0; j < g2.ny(); ++j) {
    std::copy(p.Q.begin(), p.Q.end(), s.eta.begin() + static_cast<std::ptrdiff_t>(j * nx));
    std::copy(p.V.begin(), p.V.end(), s.vx.begin() + static_cast<std::ptrdiff_t>(j * nx));
  }
  return s;
}

namespace {

const SolitaryProfile& need_profile(const std::shared_ptr<const SolitaryProfile>& p) {
  if (!p) throw std::invalid_argument("initial data needs a solitary profile");
  return *p;
}

WaveState profile_state(const SolitaryProfile& p, const TorusGrid& g) {
  if (g.is_1d()) {
    if (!g.same_as(p.grid)) throw std::invalid_argument("profile grid differs from the run grid");
    WaveState s = WaveState::rest(g);
    s.eta = p.Q;
    s.vx = p.V;
    return s;
  }
  return line_extend(p, g);
}

struct Builder {
  const TorusGrid& g;

  WaveState operator()(const LineWave& w) const { return profile_state(need_profile(w.profile), g); }

  WaveState operator()(const GaussianPerturbation& w) const {
    if (!(w.alpha > 0.0)) throw std::invalid_argument("gaussian perturbation: alpha must be > 0");
    WaveState s = profile_state(need_profile(w.profile), g);
    if (w.field == Field::vy && g.is_1d()) {
      throw std::invalid_argument("gaussian perturbation of vy needs a 2D grid");
    }
    auto f = s.field(w.field);
    const auto x = g.nodes(Axis::x);
    const std::size_t nx = g.nx();
    for (std::size_t j = 0; j < g.ny(); ++j) {
      const double y2 = g.is_1d() ? 0.0 : g.nodes(Axis::y)[j] * g.nodes(Axis::y)[j];
      for (std::size_t i = 0; i < nx; ++i) {
        f[j * nx + i] += w.amplitude * std::exp(-x[i] * x[i] - w.alpha * y2);
      }
    }
    return s;
  }

  WaveState operator()(const CosDeformation& w) const {
    const SolitaryProfile& p = need_profile(w.profile);
    if (g.is_1d()) throw std::invalid_argument("cos deformation needs a 2D grid");
    if (std::abs(w.a) >= std::numbers::pi * g.lx()) {
      throw std::invalid_argument("cos deformation: |a| exceeds the profile half-period");
    }
    WaveState s = line_extend(p, g);
    if (w.a == 0.0) return s;
    const auto y = g.nodes(Axis::y);
    const std::size_t nx = g.nx();
    for (std::size_t j = 0; j < g.ny(); ++j) {
      const RealArray row = shifted_profile(p.Q, p.grid, w.a * std::cos(y[j]));
      std::copy(row.begin(), row.end(), s.eta.begin() + static_cast<std::ptrdiff_t>(j * nx));
    }
    return s;
  }

  WaveState operator()(const GaussianHump& w) const {
    if (!(w.alpha > 0.0)) throw std::invalid_argument("gaussian hump: alpha must be > 0");
    if (w.cavitation && !(w.kappa < 0.0)) {
      throw std::invalid_argument("cavitation data needs kappa < 0");
    }
    if (!w.cavitation && !(w.kappa > 0.0)) {
      throw std::invalid_argument("localized data needs kappa > 0");
    }
    WaveState s = WaveState::rest(g);
    const auto x = g.nodes(Axis::x);
    const std::size_t nx = g.nx();
    for (std::size_t j = 0; j < g.ny(); ++j) {
      const double y2 = g.is_1d() ? 0.0 : g.nodes(Axis::y)[j] * g.nodes(Axis::y)[j];
      for (std::size_t i = 0; i < nx; ++i) {
        s.eta[j * nx + i] = w.kappa * std::exp(-(x[i] * x[i] + w.alpha * y2));
      }
    }
    return s;
  }
};

constexpr char kProfileMagic[5] = "ASPW";
constexpr std::uint8_t kProfileVersion = 1;

}  // namespace

WaveState build_initial_data(const InitialDataSpec& spec, const TorusGrid& grid) {
  return std::visit(Builder{grid}, spec);
}

void write_profile(std::ostream& out, const SolitaryProfile& p) {
  out.write(kProfileMagic, 4);
  binary::put<std::uint8_t>(out, kProfileVersion);
  binary::put<double>(out, p.c);
  binary::put<double>(out, p.eps);
  binary::put<std::uint64_t>(out, p.grid.nx());
  binary::put<double>(out, p.grid.lx());
  binary::put_doubles(out, p.Q);
  binary::put_doubles(out, p.V);
  if (!out) throw std::runtime_error("failed writing profile");
}

SolitaryProfile read_profile(std::istream& in) {
  binary::expect_magic(in, kProfileMagic);
  const auto version = binary::get<std::uint8_t>(in, "version");
  if (version != kProfileVersion) {
    throw FormatError("unsupported profile version " + std::to_string(version));
  }
  const double c = binary::get<double>(in, "c");
  const double eps = binary::get<double>(in, "eps");
  const auto nx = binary::get<std::uint64_t>(in, "N_x");
  const double lx = binary::get<double>(in, "L_x");
  std::optional<TorusGrid> grid;
  try {
    grid = make_grid_1d(static_cast<std::size_t>(nx), lx);
  } catch (const GridError& e) {
    throw FormatError(std::string("profile header: ") + e.what());
  }
  SolitaryProfile p{c, eps, *grid, RealArray(grid->size()), RealArray(grid->size()), 0.0, 0, {}, {}};
  binary::get_doubles(in, p.Q, "Q");
  binary::get_doubles(in, p.V, "V");
  p.residual_norm = max_abs(profile_residual(p.V, p.c, p.eps, p.grid));
  return p;
}

void save_profile(const std::string& path, const SolitaryProfile& p) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_profile(out, p);
}

SolitaryProfile load_profile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_profile(in);
}

}  // namespace asbq
