#pragma once

#include <Eigen/Core>

#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>

namespace mhdv {

using Index = Eigen::Index;

/// Truncated Fourier lattice on the unit torus [0,1]^3.
///
/// Modes are stored in FFT order: flat index (i1*n + i2)*n + i3, where
/// i in [0, n) maps to the integer wavenumber k = i for i < n/2 and
/// k = i - n otherwise, so every axis covers {-n/2, ..., n/2-1}.
/// The angular wavevector is kappa = 2*pi*k and the Stokes eigenvalue of
/// mode k is |kappa|^2.  A mode is retained by the dealias mask iff
/// 3|k_i| < n on every axis, which also removes every Nyquist plane.
template <typename Scalar>
class WavenumberGrid {
 public:
  using RealArray = Eigen::Array<Scalar, Eigen::Dynamic, 1>;
  using KappaArray = Eigen::Array<Scalar, Eigen::Dynamic, 3>;
  using Mask = Eigen::Array<bool, Eigen::Dynamic, 1>;

  explicit WavenumberGrid(int n) : n_(n) {
    if (n < 8 || n % 2 != 0) {
      throw std::invalid_argument("grid size must be even and >= 8, got " +
                                  std::to_string(n));
    }
    const Index total = size();
    kappa_.resize(total, 3);
    kappa_sq_.resize(total);
    inv_kappa_sq_.resize(total);
    mask_.resize(total);
    weights_.resize(total);
    const Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
    for (Index idx = 0; idx < total; ++idx) {
      const Eigen::Vector3i k = wavevector(idx);
      Scalar k2 = 0;
      bool retained = true;
      for (int d = 0; d < 3; ++d) {
        kappa_(idx, d) = two_pi * Scalar(k[d]);
        k2 += kappa_(idx, d) * kappa_(idx, d);
        retained = retained && (3 * std::abs(k[d]) < n_);
      }
      kappa_sq_[idx] = k2;
      inv_kappa_sq_[idx] = k2 > 0 ? Scalar(1) / k2 : Scalar(0);
      mask_[idx] = retained;
      weights_[idx] = retained ? Scalar(1) : Scalar(0);
      if (retained) kappa_sq_max_ = std::max(kappa_sq_max_, k2);
    }
  }

  int n() const { return n_; }
  Index size() const { return Index(n_) * n_ * n_; }
  Scalar dx() const { return Scalar(1) / Scalar(n_); }

  /// Largest retained |k_i|.
  int cutoff() const { return (n_ - 1) / 3; }

  int wavenumber(int i) const { return i < n_ / 2 ? i : i - n_; }
  int lattice_index(int k) const { return k >= 0 ? k : k + n_; }

  Eigen::Vector3i wavevector(Index idx) const {
    const int i3 = int(idx % n_);
    const int i2 = int((idx / n_) % n_);
    const int i1 = int(idx / (Index(n_) * n_));
    return {wavenumber(i1), wavenumber(i2), wavenumber(i3)};
  }

  Index index_of(int k1, int k2, int k3) const {
    return (Index(lattice_index(k1)) * n_ + lattice_index(k2)) * n_ +
           lattice_index(k3);
  }
  Index index_of(const Eigen::Vector3i& k) const {
    return index_of(k[0], k[1], k[2]);
  }

  /// Flat index of -k (a Nyquist component maps onto itself).
  Index mirror(Index idx) const {
    const int i3 = int(idx % n_);
    const int i2 = int((idx / n_) % n_);
    const int i1 = int(idx / (Index(n_) * n_));
    auto flip = [this](int i) { return (n_ - i) % n_; };
    return (Index(flip(i1)) * n_ + flip(i2)) * n_ + flip(i3);
  }

  bool is_nyquist(Index idx) const {
    const Eigen::Vector3i k = wavevector(idx);
    return k.minCoeff() == -n_ / 2;
  }

  const KappaArray& kappa() const { return kappa_; }
  const RealArray& kappa_sq() const { return kappa_sq_; }
  /// 1/|kappa|^2, with 0 at the zero mode.
  const RealArray& inv_kappa_sq() const { return inv_kappa_sq_; }
  const Mask& dealias_mask() const { return mask_; }
  /// The dealias mask as 0/1 multipliers.
  const RealArray& dealias_weights() const { return weights_; }
  Scalar kappa_sq_max() const { return kappa_sq_max_; }

 private:
  int n_;
  KappaArray kappa_;
  RealArray kappa_sq_;
  RealArray inv_kappa_sq_;
  Mask mask_;
  RealArray weights_;
  Scalar kappa_sq_max_ = 0;
};

template <typename Scalar>
using GridPtr = std::shared_ptr<const WavenumberGrid<Scalar>>;

template <typename Scalar = double>
GridPtr<Scalar> make_grid(int n) {
  return std::make_shared<const WavenumberGrid<Scalar>>(n);
}

}  // namespace mhdv
