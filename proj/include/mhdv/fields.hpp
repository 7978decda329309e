#pragma once

#include "mhdv/grid.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <complex>
#include <stdexcept>
#include <string>
#include <utility>

namespace mhdv {

/// Fourier coefficients of a real periodic field with `Components`
/// components, one row per lattice mode in FFT order.  Coefficients are
/// Fourier-series coefficients, so |f|_{L2}^2 = sum |coeff|^2.
template <typename Scalar, int Components>
class BasicSpectralField {
 public:
  using Complex = std::complex<Scalar>;
  using Coeffs = Eigen::Matrix<Complex, Eigen::Dynamic, Components>;

  BasicSpectralField() = default;

  explicit BasicSpectralField(GridPtr<Scalar> grid)
      : grid_(std::move(grid)),
        coeffs_(Coeffs::Zero(grid_->size(), Components)) {}

  BasicSpectralField(GridPtr<Scalar> grid, Coeffs coeffs, bool divfree = false)
      : grid_(std::move(grid)), coeffs_(std::move(coeffs)), divfree_(divfree) {
    if (coeffs_.rows() != grid_->size()) {
      throw std::invalid_argument("coefficient count does not match grid");
    }
  }

  const WavenumberGrid<Scalar>& grid() const { return *grid_; }
  const GridPtr<Scalar>& grid_ptr() const { return grid_; }

  const Coeffs& coeffs() const { return coeffs_; }
  Coeffs& coeffs() { return coeffs_; }

  /// Set once the Leray projection has been applied.
  bool divfree() const { return divfree_; }
  void set_divfree(bool value) { divfree_ = value; }

  Complex& operator()(Index mode, int component) { return coeffs_(mode, component); }
  const Complex& operator()(Index mode, int component) const {
    return coeffs_(mode, component);
  }

  BasicSpectralField& operator+=(const BasicSpectralField& other) {
    coeffs_ += other.coeffs_;
    divfree_ = divfree_ && other.divfree_;
    return *this;
  }
  BasicSpectralField& operator-=(const BasicSpectralField& other) {
    coeffs_ -= other.coeffs_;
    divfree_ = divfree_ && other.divfree_;
    return *this;
  }
  BasicSpectralField& operator*=(Scalar factor) {
    coeffs_ *= factor;
    return *this;
  }

 private:
  GridPtr<Scalar> grid_;
  Coeffs coeffs_;
  bool divfree_ = false;
};

template <typename Scalar>
using SpectralField = BasicSpectralField<Scalar, 3>;
template <typename Scalar>
using ScalarSpectralField = BasicSpectralField<Scalar, 1>;

template <typename Scalar, int C>
BasicSpectralField<Scalar, C> operator+(BasicSpectralField<Scalar, C> a,
                                        const BasicSpectralField<Scalar, C>& b) {
  a += b;
  return a;
}
template <typename Scalar, int C>
BasicSpectralField<Scalar, C> operator-(BasicSpectralField<Scalar, C> a,
                                        const BasicSpectralField<Scalar, C>& b) {
  a -= b;
  return a;
}
template <typename Scalar, int C>
BasicSpectralField<Scalar, C> operator*(Scalar factor, BasicSpectralField<Scalar, C> a) {
  a *= factor;
  return a;
}

/// Physical-space samples at x_j = j/n, one row per collocation point in
/// the same flat order as the lattice.
template <typename Scalar, int Components>
class BasicRealField {
 public:
  using Values = Eigen::Matrix<Scalar, Eigen::Dynamic, Components>;

  BasicRealField() = default;
  explicit BasicRealField(GridPtr<Scalar> grid)
      : grid_(std::move(grid)), values_(Values::Zero(grid_->size(), Components)) {}
  BasicRealField(GridPtr<Scalar> grid, Values values)
      : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.rows() != grid_->size()) {
      throw std::invalid_argument("sample count does not match grid");
    }
  }

  const WavenumberGrid<Scalar>& grid() const { return *grid_; }
  const GridPtr<Scalar>& grid_ptr() const { return grid_; }
  const Values& values() const { return values_; }
  Values& values() { return values_; }

  /// Coordinates of collocation point `idx`.
  Eigen::Matrix<Scalar, 3, 1> point(Index idx) const {
    const int n = grid_->n();
    return {Scalar(idx / (Index(n) * n)) / n, Scalar((idx / n) % n) / n,
            Scalar(idx % n) / n};
  }

 private:
  GridPtr<Scalar> grid_;
  Values values_;
};

template <typename Scalar>
using RealField = BasicRealField<Scalar, 3>;
template <typename Scalar>
using ScalarRealField = BasicRealField<Scalar, 1>;

template <typename A, typename B>
void require_same_grid(const A& a, const B& b) {
  if (a.grid().n() != b.grid().n()) {
    throw std::invalid_argument("grid mismatch: n=" + std::to_string(a.grid().n()) +
                                " vs n=" + std::to_string(b.grid().n()));
  }
}

/// Real L2 inner product, via Parseval.
template <typename Scalar, int C>
Scalar inner(const BasicSpectralField<Scalar, C>& f, const BasicSpectralField<Scalar, C>& g) {
  require_same_grid(f, g);
  return (f.coeffs().array() * g.coeffs().array().conjugate()).real().sum();
}

/// Largest |coeff(k) - conj(coeff(-k))| over all modes.
template <typename Scalar, int C>
Scalar hermitian_defect(const BasicSpectralField<Scalar, C>& f) {
  const auto& grid = f.grid();
  Scalar worst = 0;
  for (Index idx = 0; idx < grid.size(); ++idx) {
    const Index m = grid.mirror(idx);
    for (int c = 0; c < C; ++c) {
      worst = std::max(worst, std::abs(f(idx, c) - std::conj(f(m, c))));
    }
  }
  return worst;
}

/// max_k |kappa . coeff(k)|.
template <typename Scalar>
Scalar divergence_max(const SpectralField<Scalar>& f) {
  const auto& kappa = f.grid().kappa();
  const auto div = (f.coeffs().col(0).array() * kappa.col(0) +
                    f.coeffs().col(1).array() * kappa.col(1) +
                    f.coeffs().col(2).array() * kappa.col(2))
                       .abs();
  return div.size() ? div.maxCoeff() : Scalar(0);
}

/// Zero every mode outside the two-thirds mask (including Nyquist planes).
template <typename Scalar, int C>
void apply_dealias(BasicSpectralField<Scalar, C>& f) {
  f.coeffs().array().colwise() *= f.grid().dealias_weights().template cast<std::complex<Scalar>>();
}

template <typename Scalar, int C>
void remove_mean(BasicSpectralField<Scalar, C>& f) {
  f.coeffs().row(0).setZero();
}

/// Replace coefficients by their Hermitian-symmetric part and zero the
/// Nyquist modes, which have no conjugate partner.
template <typename Scalar, int C>
void symmetrize(BasicSpectralField<Scalar, C>& f) {
  const auto& grid = f.grid();
  auto& c = f.coeffs();
  for (Index idx = 0; idx < grid.size(); ++idx) {
    const Index m = grid.mirror(idx);
    if (grid.is_nyquist(idx)) {
      c.row(idx).setZero();
      continue;
    }
    if (m < idx) continue;
    for (int comp = 0; comp < C; ++comp) {
      const auto avg = (c(idx, comp) + std::conj(c(m, comp))) / Scalar(2);
      c(idx, comp) = avg;
      c(m, comp) = std::conj(avg);
    }
  }
}

}  // namespace mhdv
