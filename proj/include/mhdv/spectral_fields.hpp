#pragma once

#include "mhdv/fft.hpp"
#include "mhdv/fields.hpp"
#include "mhdv/grid.hpp"

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace mhdv {

enum class MeanMode { keep, zero };

template <typename Scalar, int C>
BasicRealField<Scalar, C> to_physical(const BasicSpectralField<Scalar, C>& f,
                                      FftEngine<Scalar>& fft) {
  BasicRealField<Scalar, C> out(f.grid_ptr());
  for (int c = 0; c < C; ++c) {
    fft.inverse(std::span(f.coeffs().col(c).data(), f.grid().size()),
                std::span(out.values().col(c).data(), f.grid().size()));
  }
  return out;
}

template <typename Scalar, int C>
BasicRealField<Scalar, C> to_physical(const BasicSpectralField<Scalar, C>& f) {
  FftEngine<Scalar> fft(f.grid().n());
  return to_physical(f, fft);
}

/// Forward transform.  Input must be band-limited to the lattice; content
/// above n/2 aliases onto the lattice and is not detected.
template <typename Scalar, int C>
BasicSpectralField<Scalar, C> to_spectral(const BasicRealField<Scalar, C>& f,
                                          FftEngine<Scalar>& fft,
                                          MeanMode mean = MeanMode::keep) {
  BasicSpectralField<Scalar, C> out(f.grid_ptr());
  for (int c = 0; c < C; ++c) {
    fft.forward(std::span(f.values().col(c).data(), f.grid().size()),
                std::span(out.coeffs().col(c).data(), f.grid().size()));
  }
  if (mean == MeanMode::zero) remove_mean(out);
  return out;
}

template <typename Scalar, int C>
BasicSpectralField<Scalar, C> to_spectral(const BasicRealField<Scalar, C>& f,
                                          MeanMode mean = MeanMode::keep) {
  FftEngine<Scalar> fft(f.grid().n());
  return to_spectral(f, fft, mean);
}

/// Per-mode Leray-Helmholtz projection: c -> c - kappa (kappa.c)/|kappa|^2.
template <typename Scalar>
void leray_project_inplace(SpectralField<Scalar>& f) {
  const auto& grid = f.grid();
  const auto& kappa = grid.kappa();
  auto& c = f.coeffs();
  const auto dot = ((c.col(0).array() * kappa.col(0) + c.col(1).array() * kappa.col(1) +
                     c.col(2).array() * kappa.col(2)) *
                    grid.inv_kappa_sq())
                       .eval();
  for (int d = 0; d < 3; ++d) c.col(d).array() -= dot * kappa.col(d);
  c.row(0).setZero();
  f.set_divfree(true);
}

template <typename Scalar>
SpectralField<Scalar> leray_project(SpectralField<Scalar> f) {
  leray_project_inplace(f);
  return f;
}

// ---------------------------------------------------------------------------
// Initial conditions

enum class IcKind { taylor_green, abc, single_mode_b, elsasser, random_divfree };

std::string_view to_string(IcKind kind);
IcKind parse_ic_kind(std::string_view name);

/// Initial-condition descriptor.
///
/// `amplitude` scales the velocity pattern (Taylor-Green, ABC, the shared
/// Elsasser field, or the L2 norm of a random field).  The magnetic part is
/// a single mode b_amplitude * b_direction * cos(2 pi b_mode . x) for every
/// kind except random_divfree, where it is an independent random field of
/// L2 norm b_amplitude.  When b_amplitude is unset it defaults to 1 for
/// single_mode_b, to `amplitude` for random_divfree, and to 0 otherwise.
struct IcSpec {
  IcKind kind = IcKind::taylor_green;
  double amplitude = 1.0;
  std::optional<double> b_amplitude;
  Eigen::Vector3i b_mode{1, 0, 0};
  Eigen::Vector3d b_direction{0, 1, 0};
  double k0 = 2.0;
  std::uint64_t seed = 0;

  double resolved_b_amplitude() const {
    if (b_amplitude) return *b_amplitude;
    switch (kind) {
      case IcKind::single_mode_b: return 1.0;
      case IcKind::random_divfree: return amplitude;
      default: return 0.0;
    }
  }
};

namespace detail {

template <typename Scalar>
SpectralField<Scalar> finish_field(SpectralField<Scalar> f) {
  apply_dealias(f);
  remove_mean(f);
  leray_project_inplace(f);
  return f;
}

template <typename Scalar, typename Fn>
SpectralField<Scalar> sample_field(const GridPtr<Scalar>& grid, FftEngine<Scalar>& fft, Fn&& fn) {
  RealField<Scalar> real(grid);
  for (Index idx = 0; idx < grid->size(); ++idx) {
    real.values().row(idx) = fn(real.point(idx)).transpose();
  }
  return finish_field(to_spectral(real, fft, MeanMode::zero));
}

template <typename Scalar>
SpectralField<Scalar> single_mode(const GridPtr<Scalar>& grid, const Eigen::Vector3i& k,
                                  const Eigen::Vector3d& direction, double amplitude) {
  SpectralField<Scalar> f(grid);
  if (amplitude == 0.0) {
    f.set_divfree(true);
    return f;
  }
  if (k.isZero()) throw std::invalid_argument("single-mode wavevector must be nonzero");
  if (direction.dot(k.cast<double>()) != 0.0) {
    throw std::invalid_argument("single-mode direction must be orthogonal to its wavevector");
  }
  const Index idx = grid->index_of(k);
  if ((3 * k.cwiseAbs().array() >= grid->n()).any()) {
    throw std::invalid_argument("single-mode wavevector lies outside the dealiased set");
  }
  const Index mirror = grid->mirror(idx);
  for (int d = 0; d < 3; ++d) {
    const Scalar half = Scalar(amplitude * direction[d] / 2);
    f(idx, d) = half;
    f(mirror, d) = half;
  }
  f.set_divfree(true);
  return f;
}

/// Random Hermitian solenoidal field with shell spectrum k^4 exp(-(k/k0)^2)
/// (k in integer wavenumber units), rescaled to L2 norm `norm`.
template <typename Scalar>
SpectralField<Scalar> random_solenoidal(const GridPtr<Scalar>& grid, double k0, double norm,
                                        std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  SpectralField<Scalar> f(grid);
  const auto& mask = grid->dealias_mask();
  for (Index idx = 1; idx < grid->size(); ++idx) {
    const Index m = grid->mirror(idx);
    if (!mask[idx] || m < idx) continue;
    const double k = grid->wavevector(idx).template cast<double>().norm();
    const double energy = std::pow(k, 4) * std::exp(-(k / k0) * (k / k0));
    const double scale = std::sqrt(energy / (4.0 * std::numbers::pi * k * k));
    for (int d = 0; d < 3; ++d) {
      const double re = gauss(rng), im = gauss(rng);
      f(idx, d) = std::complex<Scalar>(Scalar(scale * re), Scalar(scale * im));
      f(m, d) = std::conj(f(idx, d));
    }
    if (m == idx) {
      for (int d = 0; d < 3; ++d) f(idx, d) = std::real(f(idx, d));
    }
  }
  leray_project_inplace(f);
  const Scalar current = std::sqrt(inner(f, f));
  if (current > 0) f *= Scalar(norm) / current;
  return f;
}

}  // namespace detail

/// Build (u, B).  Both are dealiased, mean-zero, Hermitian and marked
/// divergence-free.
template <typename Scalar>
std::pair<SpectralField<Scalar>, SpectralField<Scalar>> make_ic(const IcSpec& spec,
                                                                 const GridPtr<Scalar>& grid) {
  if (!(spec.k0 > 0)) throw std::invalid_argument("k0 must be > 0");
  if (!std::isfinite(spec.amplitude)) throw std::invalid_argument("amplitude must be finite");
  const double b_amp = spec.resolved_b_amplitude();
  if (!std::isfinite(b_amp)) throw std::invalid_argument("b_amplitude must be finite");

  FftEngine<Scalar> fft(grid->n());
  using Vec3 = Eigen::Matrix<Scalar, 3, 1>;
  const Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
  const Scalar a = Scalar(spec.amplitude);

  auto taylor_green = [&] {
    return detail::sample_field<Scalar>(grid, fft, [&](const Vec3& x) {
      const Scalar X = two_pi * x[0], Y = two_pi * x[1], Z = two_pi * x[2];
      return Vec3(a * std::sin(X) * std::cos(Y) * std::cos(Z),
                  -a * std::cos(X) * std::sin(Y) * std::cos(Z), Scalar(0));
    });
  };
  auto single_b = [&] { return detail::single_mode<Scalar>(grid, spec.b_mode, spec.b_direction, b_amp); };

  switch (spec.kind) {
    case IcKind::taylor_green:
      return {taylor_green(), single_b()};
    case IcKind::abc: {
      auto u = detail::sample_field<Scalar>(grid, fft, [&](const Vec3& x) {
        const Scalar X = two_pi * x[0], Y = two_pi * x[1], Z = two_pi * x[2];
        return Vec3(a * (std::sin(Z) + std::cos(Y)), a * (std::sin(X) + std::cos(Z)),
                    a * (std::sin(Y) + std::cos(X)));
      });
      return {std::move(u), single_b()};
    }
    case IcKind::single_mode_b: {
      SpectralField<Scalar> u(grid);
      u.set_divfree(true);
      return {std::move(u), single_b()};
    }
    case IcKind::elsasser: {
      auto u = taylor_green();
      auto b = u;
      return {std::move(u), std::move(b)};
    }
    case IcKind::random_divfree: {
      std::mt19937_64 rng(spec.seed);
      auto u = detail::random_solenoidal<Scalar>(grid, spec.k0, spec.amplitude, rng);
      auto b = detail::random_solenoidal<Scalar>(grid, spec.k0, b_amp, rng);
      return {std::move(u), std::move(b)};
    }
  }
  throw std::invalid_argument("unknown initial condition kind");
}

}  // namespace mhdv
