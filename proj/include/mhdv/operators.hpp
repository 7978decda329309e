#pragma once

#include "mhdv/fft.hpp"
#include "mhdv/fields.hpp"
#include "mhdv/spectral_fields.hpp"

#include <Eigen/Core>

#include <cmath>
#include <span>
#include <stdexcept>
#include <utility>

namespace mhdv {

/// Stokes operator; on the periodic torus A = -Laplacian, i.e. |kappa|^2 per mode.
template <typename Scalar, int C>
BasicSpectralField<Scalar, C> apply_A(BasicSpectralField<Scalar, C> f) {
  f.coeffs().array().colwise() *= f.grid().kappa_sq().template cast<std::complex<Scalar>>();
  return f;
}

/// (I + alpha^2 A)^{-1}, the Voigt filter.
template <typename Scalar, int C>
BasicSpectralField<Scalar, C> helmholtz_inverse(BasicSpectralField<Scalar, C> f, Scalar alpha) {
  if (!(alpha >= 0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("alpha must be finite and >= 0");
  }
  if (alpha == 0) return f;
  const auto factor = (Scalar(1) + alpha * alpha * f.grid().kappa_sq()).inverse().eval();
  f.coeffs().array().colwise() *= factor.template cast<std::complex<Scalar>>();
  return f;
}

/// Squared H^s norm, sum |kappa|^{2s} |coeff|^2.
template <typename Scalar, int C>
Scalar sobolev_norm_sq(const BasicSpectralField<Scalar, C>& f, Scalar s) {
  if (!(s >= 0)) throw std::invalid_argument("Sobolev index must be >= 0");
  const auto power = f.coeffs().rowwise().squaredNorm().array();
  if (s == 0) return power.sum();
  if (s == 1) return (power * f.grid().kappa_sq()).sum();
  return (power * f.grid().kappa_sq().pow(s)).sum();
}

/// H^s norm: s = 0 is |f|, s = 1 is ||f||.
template <typename Scalar, int C>
Scalar sobolev_norm(const BasicSpectralField<Scalar, C>& f, Scalar s) {
  return std::sqrt(sobolev_norm_sq(f, s));
}

template <typename Scalar, int C>
Scalar l2_norm(const BasicSpectralField<Scalar, C>& f) {
  return sobolev_norm(f, Scalar(0));
}

template <typename Scalar, int C>
Scalar h1_norm(const BasicSpectralField<Scalar, C>& f) {
  return sobolev_norm(f, Scalar(1));
}

/// alpha^2 ||u||^2 + |u|^2 + |B|^2.
template <typename Scalar>
Scalar voigt_energy(const SpectralField<Scalar>& u, const SpectralField<Scalar>& b, Scalar alpha) {
  return alpha * alpha * sobolev_norm_sq(u, Scalar(1)) + sobolev_norm_sq(u, Scalar(0)) +
         sobolev_norm_sq(b, Scalar(0));
}

/// Pseudo-spectral evaluation of the projected nonlinearity and the MHD
/// right-hand side.  Products are formed in physical space, truncated by
/// the two-thirds mask and Leray-projected, so every result equals the
/// Galerkin-truncated bilinear term on the dealiased mode set.
///
/// Owns FFT plans and scratch buffers: one context per thread.
template <typename Scalar>
class OperatorContext {
 public:
  using Field = SpectralField<Scalar>;
  using Complex = std::complex<Scalar>;

  OperatorContext(GridPtr<Scalar> grid, Scalar alpha)
      : grid_(std::move(grid)), alpha_(alpha), fft_(grid_->n()) {
    if (!(alpha >= 0) || !std::isfinite(alpha)) {
      throw std::invalid_argument("alpha must be finite and >= 0");
    }
    const Index size = grid_->size();
    phys_.resize(size, 15);
    spec_.resize(size, 9);
    filter_ = (Scalar(1) + alpha * alpha * grid_->kappa_sq()).inverse();
  }

  const WavenumberGrid<Scalar>& grid() const { return *grid_; }
  const GridPtr<Scalar>& grid_ptr() const { return grid_; }
  Scalar alpha() const { return alpha_; }
  FftEngine<Scalar>& fft() { return fft_; }

  /// B(u, v) = P((u . grad) v), advective form.
  Field nonlinear_B(const Field& u, const Field& v) {
    auto out = advect(u, v);
    leray_project_inplace(out);
    return out;
  }

  /// Dealiased (u . grad) v without the Leray projection.
  Field advect(const Field& u, const Field& v) {
    require_same_grid(u, *this);
    require_same_grid(v, *this);
    // columns 0-2: u, 3: scratch derivative, 4-6: accumulated product
    for (int d = 0; d < 3; ++d) inverse(u, d, col(d));
    auto acc = phys_.middleCols(4, 3);
    acc.setZero();
    for (int j = 0; j < 3; ++j) {
      const auto kappa_j = std::span(grid_->kappa().col(j).data(), grid_->size());
      for (int i = 0; i < 3; ++i) {
        fft_.inverse_derivative(std::span(v.coeffs().col(i).data(), grid_->size()), kappa_j, col(3));
        acc.col(i).array() += phys_.col(j).array() * phys_.col(3).array();
      }
    }
    Field out(grid_);
    for (int i = 0; i < 3; ++i) {
      fft_.forward(col(4 + i), std::span(out.coeffs().col(i).data(), grid_->size()));
    }
    apply_dealias(out);
    remove_mean(out);
    return out;
  }

  /// b(u, v, w) = <B(u, v), w>.
  Scalar trilinear_b(const Field& u, const Field& v, const Field& w) {
    require_same_grid(w, *this);
    return inner(nonlinear_B(u, v), w);
  }

  /// Nonlinear part of the right-hand side, evaluated in divergence form:
  ///   du = (I + alpha^2 A)^{-1} P div(B (x) B - u (x) u)
  ///   dB = P div(u (x) B - B (x) u)^T
  /// which equals B(B,B) - B(u,u) and B(B,u) - B(u,B) for solenoidal
  /// inputs while needing 6 inverse and 9 forward transforms.
  std::pair<Field, Field> nonlinear_rhs(const Field& u, const Field& b) {
    require_same_grid(u, *this);
    require_same_grid(b, *this);
    for (int d = 0; d < 3; ++d) {
      inverse(u, d, col(d));
      inverse(b, d, col(3 + d));
    }
    const auto U = [&](int i) { return phys_.col(i).array(); };
    const auto Bc = [&](int i) { return phys_.col(3 + i).array(); };
    // symmetric momentum flux S_ij = B_i B_j - u_i u_j, cols 6..11
    constexpr int sym[3][3] = {{0, 1, 2}, {1, 3, 4}, {2, 4, 5}};
    for (int i = 0; i < 3; ++i) {
      for (int j = i; j < 3; ++j) {
        phys_.col(6 + sym[i][j]).array() = Bc(i) * Bc(j) - U(i) * U(j);
      }
    }
    // antisymmetric induction flux M_ij = u_i B_j - B_i u_j: M12, M13, M23
    phys_.col(12).array() = U(0) * Bc(1) - Bc(0) * U(1);
    phys_.col(13).array() = U(0) * Bc(2) - Bc(0) * U(2);
    phys_.col(14).array() = U(1) * Bc(2) - Bc(1) * U(2);
    for (int c = 0; c < 9; ++c) {
      fft_.forward(col(6 + c), std::span(spec_.col(c).data(), grid_->size()));
    }

    // per retained mode: divergence, Leray projection, Voigt filter
    const auto& kappa = grid_->kappa();
    const auto& mask = grid_->dealias_mask();
    const auto& inv_k2 = grid_->inv_kappa_sq();
    const Complex I(0, 1);
    Field du(grid_), db(grid_);
    for (Index m = 1; m < grid_->size(); ++m) {
      if (!mask[m]) continue;
      const Scalar k0 = kappa(m, 0), k1 = kappa(m, 1), k2 = kappa(m, 2);
      const auto S = [&](int c) { return spec_(m, c); };
      Complex a[3] = {k0 * S(0) + k1 * S(1) + k2 * S(2), k0 * S(1) + k1 * S(3) + k2 * S(4),
                      k0 * S(2) + k1 * S(4) + k2 * S(5)};
      const Complex M12 = spec_(m, 6), M13 = spec_(m, 7), M23 = spec_(m, 8);
      Complex c[3] = {k1 * M12 + k2 * M13, k2 * M23 - k0 * M12, -k0 * M13 - k1 * M23};
      const Complex pa = (k0 * a[0] + k1 * a[1] + k2 * a[2]) * inv_k2[m];
      const Complex pc = (k0 * c[0] + k1 * c[1] + k2 * c[2]) * inv_k2[m];
      const Scalar kk[3] = {k0, k1, k2};
      for (int d = 0; d < 3; ++d) {
        du(m, d) = I * (a[d] - kk[d] * pa) * filter_[m];
        db(m, d) = I * (c[d] - kk[d] * pc);
      }
    }
    du.set_divfree(true);
    db.set_divfree(true);
    return {std::move(du), std::move(db)};
  }

  /// Full right-hand side including -nu A u and -mu A B.
  std::pair<Field, Field> mhd_rhs(const Field& u, const Field& b, Scalar mu, Scalar nu) {
    if (!(mu >= 0) || !(nu >= 0)) throw std::invalid_argument("mu and nu must be >= 0");
    auto [du, db] = nonlinear_rhs(u, b);
    if (nu != 0) du -= helmholtz_inverse(nu * apply_A(u), alpha_);
    if (mu != 0) db -= mu * apply_A(b);
    du.set_divfree(true);
    db.set_divfree(true);
    return {std::move(du), std::move(db)};
  }

  /// Largest |value| over physical collocation points of the pointwise
  /// Euclidean magnitude of f.
  Scalar max_magnitude(const Field& f) {
    for (int d = 0; d < 3; ++d) inverse(f, d, col(d));
    return phys_.leftCols(3).rowwise().norm().maxCoeff();
  }

 private:
  std::span<Scalar> col(int c) { return std::span(phys_.col(c).data(), grid_->size()); }

  void inverse(const Field& f, int component, std::span<Scalar> out) {
    fft_.inverse(std::span(f.coeffs().col(component).data(), grid_->size()), out);
  }

  GridPtr<Scalar> grid_;
  Scalar alpha_;
  FftEngine<Scalar> fft_;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> phys_;
  Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic> spec_;
  Eigen::Array<Scalar, Eigen::Dynamic, 1> filter_;
};

template <typename Scalar>
std::pair<SpectralField<Scalar>, SpectralField<Scalar>> mhd_rhs(const SpectralField<Scalar>& u,
                                                                 const SpectralField<Scalar>& b,
                                                                 OperatorContext<Scalar>& ctx,
                                                                 Scalar mu, Scalar nu) {
  return ctx.mhd_rhs(u, b, mu, nu);
}

}  // namespace mhdv
