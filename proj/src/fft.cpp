#include "mhdv/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <mutex>
#include <new>
#include <stdexcept>
#include <utility>

namespace mhdv {
namespace {

// The FFTW planner is not re-entrant; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

FftEngine<double>::FftEngine(int n) : n_(n) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("FFT size must be even");
  const std::size_t real_count = std::size_t(n) * n * n;
  const std::size_t half_count = std::size_t(n) * n * (n / 2 + 1);
  real_ = fftw_alloc_real(real_count);
  half_ = reinterpret_cast<Complex*>(fftw_alloc_complex(half_count));
  if (!real_ || !half_) {
    release();
    throw std::bad_alloc();
  }
  std::lock_guard lock(planner_mutex());
  forward_plan_ = fftw_plan_dft_r2c_3d(n, n, n, real_, reinterpret_cast<fftw_complex*>(half_),
                                       FFTW_ESTIMATE);
  inverse_plan_ = fftw_plan_dft_c2r_3d(n, n, n, reinterpret_cast<fftw_complex*>(half_), real_,
                                       FFTW_ESTIMATE);
  if (!forward_plan_ || !inverse_plan_) {
    release();
    throw std::runtime_error("FFTW planning failed");
  }
}

FftEngine<double>::~FftEngine() { release(); }

FftEngine<double>::FftEngine(FftEngine&& other) noexcept
    : n_(other.n_),
      real_(std::exchange(other.real_, nullptr)),
      half_(std::exchange(other.half_, nullptr)),
      forward_plan_(std::exchange(other.forward_plan_, nullptr)),
      inverse_plan_(std::exchange(other.inverse_plan_, nullptr)) {}

FftEngine<double>& FftEngine<double>::operator=(FftEngine&& other) noexcept {
  if (this != &other) {
    release();
    n_ = other.n_;
    real_ = std::exchange(other.real_, nullptr);
    half_ = std::exchange(other.half_, nullptr);
    forward_plan_ = std::exchange(other.forward_plan_, nullptr);
    inverse_plan_ = std::exchange(other.inverse_plan_, nullptr);
  }
  return *this;
}

void FftEngine<double>::release() {
  std::lock_guard lock(planner_mutex());
  if (forward_plan_) fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  if (inverse_plan_) fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
  forward_plan_ = inverse_plan_ = nullptr;
  if (real_) fftw_free(real_);
  if (half_) fftw_free(half_);
  real_ = nullptr;
  half_ = nullptr;
}

void FftEngine<double>::inverse(std::span<const Complex> coeffs, std::span<double> values) {
  const std::size_t n = n_, nh = n / 2 + 1;
  for (std::size_t row = 0; row < n * n; ++row) {
    std::memcpy(half_ + row * nh, coeffs.data() + row * n, nh * sizeof(Complex));
  }
  fftw_execute(static_cast<fftw_plan>(inverse_plan_));
  std::copy_n(real_, n * n * n, values.data());
}

void FftEngine<double>::inverse_derivative(std::span<const Complex> coeffs,
                                           std::span<const double> kappa_axis,
                                           std::span<double> values) {
  const std::size_t n = n_, nh = n / 2 + 1;
  for (std::size_t row = 0; row < n * n; ++row) {
    const Complex* src = coeffs.data() + row * n;
    const double* kap = kappa_axis.data() + row * n;
    Complex* dst = half_ + row * nh;
    for (std::size_t i3 = 0; i3 < nh; ++i3) {
      dst[i3] = Complex(-kap[i3] * src[i3].imag(), kap[i3] * src[i3].real());
    }
  }
  fftw_execute(static_cast<fftw_plan>(inverse_plan_));
  std::copy_n(real_, n * n * n, values.data());
}

void FftEngine<double>::forward(std::span<const double> values, std::span<Complex> coeffs) {
  const std::size_t n = n_, nh = n / 2 + 1;
  std::copy_n(values.data(), n * n * n, real_);
  fftw_execute(static_cast<fftw_plan>(forward_plan_));
  const double scale = 1.0 / double(n * n * n);
  for (std::size_t i1 = 0; i1 < n; ++i1) {
    const std::size_t m1 = (n - i1) % n;
    for (std::size_t i2 = 0; i2 < n; ++i2) {
      const std::size_t m2 = (n - i2) % n;
      const Complex* src = half_ + (i1 * n + i2) * nh;
      const Complex* mirror = half_ + (m1 * n + m2) * nh;
      Complex* dst = coeffs.data() + (i1 * n + i2) * n;
      for (std::size_t i3 = 0; i3 < nh; ++i3) dst[i3] = src[i3] * scale;
      for (std::size_t i3 = nh; i3 < n; ++i3) dst[i3] = std::conj(mirror[n - i3]) * scale;
    }
  }
}

double FftEngine<double>::imaginary_residue(std::span<const Complex> coeffs) {
  const int n = n_;
  const std::size_t total = std::size_t(n) * n * n;
  auto* buf = fftw_alloc_complex(total);
  if (!buf) throw std::bad_alloc();
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_3d(n, n, n, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  std::memcpy(buf, coeffs.data(), total * sizeof(Complex));
  fftw_execute(plan);
  double max_re = 0, max_im = 0;
  for (std::size_t i = 0; i < total; ++i) {
    max_re = std::max(max_re, std::abs(buf[i][0]));
    max_im = std::max(max_im, std::abs(buf[i][1]));
  }
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(buf);
  return max_re > 0 ? max_im / max_re : max_im;
}

}  // namespace mhdv
