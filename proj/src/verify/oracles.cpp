#include "mhdv/verify.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>

namespace mhdv::verify {
namespace {

using Vec3c = Eigen::Vector3cd;

Eigen::Vector3d kappa_of(const Eigen::Vector3i& k) {
  return 2 * std::numbers::pi * k.cast<double>();
}

bool retained(const Eigen::Vector3i& k, int n) {
  return (3 * k.cwiseAbs().array() < n).all();
}

Eigen::Matrix3d projector(const Eigen::Vector3i& k) {
  if (k.isZero()) return Eigen::Matrix3d::Zero();
  const Eigen::Vector3d kap = kappa_of(k);
  return Eigen::Matrix3d::Identity() - kap * kap.transpose() / kap.squaredNorm();
}

std::vector<Eigen::Vector3i> retained_modes(const WavenumberGrid<double>& grid) {
  std::vector<Eigen::Vector3i> modes;
  const int c = grid.cutoff();
  for (int a = -c; a <= c; ++a) {
    for (int b = -c; b <= c; ++b) {
      for (int d = -c; d <= c; ++d) modes.emplace_back(a, b, d);
    }
  }
  return modes;
}

Vec3c coeff(const SpectralField<double>& f, const Eigen::Vector3i& k) {
  const Index idx = f.grid().index_of(k);
  return {f(idx, 0), f(idx, 1), f(idx, 2)};
}

}  // namespace

SpectralField<double> random_solenoidal_field(const GridPtr<double>& grid, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  SpectralField<double> f(grid);
  for (const auto& k : retained_modes(*grid)) {
    if (k.isZero()) continue;
    const Index idx = grid->index_of(k);
    const Index mirror = grid->index_of(Eigen::Vector3i(-k));
    if (mirror < idx) continue;
    Vec3c c;
    for (int d = 0; d < 3; ++d) c[d] = {gauss(rng), gauss(rng)};
    c = projector(k).cast<std::complex<double>>() * c / (1.0 + k.cast<double>().squaredNorm());
    for (int d = 0; d < 3; ++d) {
      f(idx, d) = c[d];
      f(mirror, d) = std::conj(c[d]);
    }
  }
  f.set_divfree(true);
  return f;
}

SpectralField<double> convolution_advect(const SpectralField<double>& u, const SpectralField<double>& v) {
  require_same_grid(u, v);
  const auto& grid = u.grid();
  const int n = grid.n();
  const auto modes = retained_modes(grid);
  const std::complex<double> I(0, 1);
  SpectralField<double> out(u.grid_ptr());
  for (const auto& p : modes) {
    const Vec3c up = coeff(u, p);
    if (up.isZero()) continue;
    for (const auto& q : modes) {
      const Eigen::Vector3i k = p + q;
      if (k.isZero() || !retained(k, n)) continue;
      const std::complex<double> rate =
          I * (up.array() * kappa_of(q).cast<std::complex<double>>().array()).sum();
      const Index idx = grid.index_of(k);
      const Vec3c vq = coeff(v, q);
      for (int d = 0; d < 3; ++d) out(idx, d) += rate * vq[d];
    }
  }
  return out;
}

SpectralField<double> dense_project(const SpectralField<double>& f) {
  const auto& grid = f.grid();
  SpectralField<double> out(f.grid_ptr());
  for (Index idx = 0; idx < grid.size(); ++idx) {
    const Vec3c c = projector(grid.wavevector(idx)).cast<std::complex<double>>() *
                    Vec3c(f(idx, 0), f(idx, 1), f(idx, 2));
    for (int d = 0; d < 3; ++d) out(idx, d) = c[d];
  }
  out.set_divfree(true);
  return out;
}

SpectralField<double> convolution_nonlinear_B(const SpectralField<double>& u,
                                              const SpectralField<double>& v) {
  return dense_project(convolution_advect(u, v));
}

Eigen::MatrixXcd leray_matrix(const WavenumberGrid<double>& grid) {
  const auto modes = retained_modes(grid);
  const Index m = Index(modes.size());
  Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(3 * m, 3 * m);
  for (Index i = 0; i < m; ++i) {
    P.block<3, 3>(3 * i, 3 * i) = projector(modes[std::size_t(i)]).cast<std::complex<double>>();
  }
  return P;
}

double relative_difference(const SpectralField<double>& a, const SpectralField<double>& b) {
  require_same_grid(a, b);
  const double scale = b.coeffs().cwiseAbs().maxCoeff();
  const double diff = (a.coeffs() - b.coeffs()).cwiseAbs().maxCoeff();
  if (scale == 0) return diff;
  return diff / scale;
}

}  // namespace mhdv::verify
