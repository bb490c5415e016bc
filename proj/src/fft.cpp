#include "asbq/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstdlib>
#include <mutex>
#include <stdexcept>
#include <string>

namespace asbq {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

void init_threads_once() {
  static std::once_flag flag;
  std::call_once(flag, [] {
    const int n = transform_threads();
    if (n > 1 && fftw_init_threads() != 0) fftw_plan_with_nthreads(n);
  });
}

void check_size(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw std::invalid_argument(std::string("FourierTransform: ") + what +
                                " has size " + std::to_string(got) +
                                ", expected " + std::to_string(want));
  }
}

bool aligned(const void* p) {
  return fftw_alignment_of(reinterpret_cast<double*>(const_cast<void*>(p))) == 0;
}

}  // namespace

void* fftw_aligned_alloc(std::size_t bytes) {
  void* p = fftw_malloc(std::max<std::size_t>(bytes, 1));
  if (p == nullptr) throw std::bad_alloc();
  return p;
}

void fftw_aligned_free(void* p) noexcept { fftw_free(p); }

int transform_threads() {
  static const int n = [] {
    const char* env = std::getenv("ASBQ_THREADS");
    if (env == nullptr) return 1;
    const int v = std::atoi(env);
    return v > 0 ? v : 1;
  }();
  return n;
}

FourierTransform::FourierTransform(std::size_t nx, std::size_t ny) : nx_(nx), ny_(ny) {
  if (nx < 2 || ny < 1) throw std::invalid_argument("FourierTransform: bad extents");
  init_threads_once();

  RealArray r(real_size());
  ComplexArray c(spectral_size());
  auto* rp = r.data();
  auto* cp = reinterpret_cast<fftw_complex*>(c.data());

  std::lock_guard lock(planner_mutex());
  const unsigned flags = FFTW_ESTIMATE;
  if (ny_ == 1) {
    forward_plan_ = fftw_plan_dft_r2c_1d(static_cast<int>(nx_), rp, cp, flags);
    inverse_plan_ = fftw_plan_dft_c2r_1d(static_cast<int>(nx_), cp, rp, flags);
  } else {
    forward_plan_ =
        fftw_plan_dft_r2c_2d(static_cast<int>(ny_), static_cast<int>(nx_), rp, cp, flags);
    inverse_plan_ =
        fftw_plan_dft_c2r_2d(static_cast<int>(ny_), static_cast<int>(nx_), cp, rp, flags);
  }
  if (forward_plan_ == nullptr || inverse_plan_ == nullptr) {
    throw std::runtime_error("FourierTransform: FFTW planning failed");
  }
}

FourierTransform::~FourierTransform() {
  std::lock_guard lock(planner_mutex());
  if (forward_plan_ != nullptr) fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  if (inverse_plan_ != nullptr) fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
}

void FourierTransform::forward(std::span<const double> in, std::span<Complex> out) const {
  check_size(in.size(), real_size(), "forward input");
  check_size(out.size(), spectral_size(), "forward output");
  if (!aligned(in.data()) || !aligned(out.data())) {
    RealArray a(in.begin(), in.end());
    ComplexArray b(out.size());
    forward(a, b);
    std::copy(b.begin(), b.end(), out.begin());
    return;
  }
  // r2c does not modify its input.
  fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_plan_), const_cast<double*>(in.data()),
                       reinterpret_cast<fftw_complex*>(out.data()));
  const double scale = 1.0 / static_cast<double>(real_size());
  for (auto& z : out) z *= scale;
}

void FourierTransform::inverse_destructive(std::span<Complex> in, std::span<double> out) const {
  check_size(in.size(), spectral_size(), "inverse input");
  check_size(out.size(), real_size(), "inverse output");
  if (!aligned(in.data()) || !aligned(out.data())) {
    ComplexArray a(in.begin(), in.end());
    RealArray b(out.size());
    inverse_destructive(a, b);
    std::copy(b.begin(), b.end(), out.begin());
    return;
  }
  fftw_execute_dft_c2r(static_cast<fftw_plan>(inverse_plan_),
                       reinterpret_cast<fftw_complex*>(in.data()), out.data());
}

void FourierTransform::inverse(std::span<const Complex> in, std::span<double> out) const {
  ComplexArray scratch(in.begin(), in.end());
  inverse_destructive(scratch, out);
}

}  // namespace asbq
