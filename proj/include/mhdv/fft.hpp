#pragma once

#include <complex>
#include <span>

namespace mhdv {

/// 3-D real FFT on an n^3 periodic grid.  Specialized per scalar type;
/// only double is provided.
///
/// Spectral data is exchanged as the full n^3 cube in FFT order and the
/// forward transform is normalized by 1/n^3.  Plans are built with
/// FFTW_ESTIMATE so the arithmetic is reproducible run to run.
/// An engine owns its work buffers and must not be shared between threads.
template <typename Scalar>
class FftEngine;

template <>
class FftEngine<double> {
 public:
  using Complex = std::complex<double>;

  explicit FftEngine(int n);
  ~FftEngine();
  FftEngine(FftEngine&& other) noexcept;
  FftEngine& operator=(FftEngine&& other) noexcept;
  FftEngine(const FftEngine&) = delete;
  FftEngine& operator=(const FftEngine&) = delete;

  int n() const { return n_; }

  /// Synthesize real samples from Hermitian coefficients.
  void inverse(std::span<const Complex> coeffs, std::span<double> values);

  /// Synthesize the samples of d/dx_axis, i.e. of i*kappa_axis*coeffs.
  void inverse_derivative(std::span<const Complex> coeffs, std::span<const double> kappa_axis,
                          std::span<double> values);

  /// Analyze real samples into the full coefficient cube.
  void forward(std::span<const double> values, std::span<Complex> coeffs);

  /// Imaginary residue of the complex synthesis of `coeffs`, relative to
  /// the largest real sample.  Uses a separate complex transform.
  double imaginary_residue(std::span<const Complex> coeffs);

 private:
  void release();

  int n_ = 0;
  double* real_ = nullptr;
  Complex* half_ = nullptr;
  void* forward_plan_ = nullptr;
  void* inverse_plan_ = nullptr;
};

}  // namespace mhdv
