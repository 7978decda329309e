#pragma once

#include "mhdv/fields.hpp"

#include <Eigen/Core>

#include <random>
#include <string>
#include <vector>

namespace mhdv::verify {

/// Reference implementations that work directly on the coefficient lattice
/// with dense loops and matrices, sharing no code with the FFT path.

/// Random real (Hermitian) field supported on the dealiased set, mean zero,
/// made solenoidal with a per-mode 3x3 projector.
SpectralField<double> random_solenoidal_field(const GridPtr<double>& grid, std::mt19937_64& rng);

/// Truncated convolution sum_{p+q=k} (u_p . i kappa_q) v_q over dealiased
/// p, q and k, mean removed.
SpectralField<double> convolution_advect(const SpectralField<double>& u, const SpectralField<double>& v);

/// Per-mode projector I - kappa kappa^T / |kappa|^2 applied as a 3x3 matrix.
SpectralField<double> dense_project(const SpectralField<double>& f);

/// Projected truncated convolution: the reference for nonlinear_B.
SpectralField<double> convolution_nonlinear_B(const SpectralField<double>& u,
                                              const SpectralField<double>& v);

/// Dense Leray matrix on the stacked (mode, component) coefficients of the
/// dealiased set, rows ordered mode-major.
Eigen::MatrixXcd leray_matrix(const WavenumberGrid<double>& grid);

/// max |a - b| / max |b| over all coefficients.
double relative_difference(const SpectralField<double>& a, const SpectralField<double>& b);

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

enum class Level { fast, full };

std::vector<Check> run_checks(Level level);

}  // namespace mhdv::verify
