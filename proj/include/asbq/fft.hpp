#pragma once

#include <complex>
#include <cstddef>
#include <new>
#include <span>
#include <vector>

namespace asbq {

using Complex = std::complex<double>;

void* fftw_aligned_alloc(std::size_t bytes);
void fftw_aligned_free(void* p) noexcept;

/// Allocator handing out FFTW-aligned storage, so any array of ours can be fed
/// to a plan through the new-array execute interface.
template <class T>
struct FftwAllocator {
  using value_type = T;

  FftwAllocator() noexcept = default;
  template <class U>
  FftwAllocator(const FftwAllocator<U>&) noexcept {}

  T* allocate(std::size_t n) {
    return static_cast<T*>(fftw_aligned_alloc(n * sizeof(T)));
  }
  void deallocate(T* p, std::size_t) noexcept { fftw_aligned_free(p); }

  template <class U>
  bool operator==(const FftwAllocator<U>&) const noexcept {
    return true;
  }
};

using RealArray = std::vector<double, FftwAllocator<double>>;
using ComplexArray = std::vector<Complex, FftwAllocator<Complex>>;

/// Real-to-half-complex transform on an ny-by-nx row-major array (x fastest).
/// ny == 1 selects the one-dimensional transform. Coefficients are scaled by
/// 1/(nx*ny) on the way forward, so the zero mode is the mean of the field.
///
/// Execution is const and reentrant; plans are created once, under a global
/// planner lock, with FFTW_ESTIMATE so runs are bit-reproducible.
class FourierTransform {
 public:
  FourierTransform(std::size_t nx, std::size_t ny);
  ~FourierTransform();

  FourierTransform(const FourierTransform&) = delete;
  FourierTransform& operator=(const FourierTransform&) = delete;

  std::size_t real_size() const { return nx_ * ny_; }
  std::size_t spectral_size() const { return (nx_ / 2 + 1) * ny_; }

  void forward(std::span<const double> in, std::span<Complex> out) const;

  /// Inverse transform that destroys `in` (FFTW c2r semantics).
  void inverse_destructive(std::span<Complex> in, std::span<double> out) const;

  /// Inverse transform preserving `in`; pays for one scratch copy.
  void inverse(std::span<const Complex> in, std::span<double> out) const;

 private:
  std::size_t nx_;
  std::size_t ny_;
  void* forward_plan_ = nullptr;
  void* inverse_plan_ = nullptr;
};

/// Number of FFTW threads, read once from ASBQ_THREADS (default 1).
int transform_threads();

}  // namespace asbq
