#pragma once

#include "mhdv/operators.hpp"
#include "mhdv/state.hpp"

#include <map>
#include <ostream>
#include <vector>

namespace mhdv {

/// One sampling instant of a run.
///
/// `dissipated` is 2 mu int_0^t ||B||^2 ds (plus 2 nu int_0^t ||u||^2 ds
/// when viscous) and `energy_residual` is
/// voigt_energy(t) - voigt_energy(0) + dissipated(t), zero for the exact
/// Galerkin flow.
template <typename Scalar>
struct DiagRecord {
  Scalar t = 0;
  Scalar l2_u = 0, v_u = 0, l2_B = 0, v_B = 0;
  Scalar voigt_energy = 0;
  Scalar dissipated = 0;
  Scalar energy_residual = 0;
  Scalar blowup_indicator = 0;  ///< alpha^2 ||u||^2
  std::map<double, Scalar> hs_u, hs_B;
  Scalar div_max_u = 0, div_max_B = 0;
};

inline const std::vector<double>& default_hs_set() {
  static const std::vector<double> set{0, 1, 2, 3};
  return set;
}

template <typename Scalar>
DiagRecord<Scalar> record(const SimState<Scalar>& state, const SimParams& params,
                          Scalar dissipated, Scalar initial_energy,
                          const std::vector<double>& hs_set = default_hs_set()) {
  const Scalar alpha = Scalar(params.alpha);
  DiagRecord<Scalar> r;
  r.t = state.t;
  const Scalar u0 = sobolev_norm_sq(state.u, Scalar(0)), u1 = sobolev_norm_sq(state.u, Scalar(1));
  const Scalar b0 = sobolev_norm_sq(state.b, Scalar(0)), b1 = sobolev_norm_sq(state.b, Scalar(1));
  r.l2_u = std::sqrt(u0);
  r.v_u = std::sqrt(u1);
  r.l2_B = std::sqrt(b0);
  r.v_B = std::sqrt(b1);
  r.blowup_indicator = alpha * alpha * u1;
  r.voigt_energy = r.blowup_indicator + u0 + b0;
  r.dissipated = dissipated;
  r.energy_residual = r.voigt_energy - initial_energy + dissipated;
  std::vector<double> set = hs_set;
  set.push_back(2);
  set.push_back(3);
  for (double s : set) {
    r.hs_u[s] = sobolev_norm(state.u, Scalar(s));
    r.hs_B[s] = sobolev_norm(state.b, Scalar(s));
  }
  r.div_max_u = divergence_max(state.u);
  r.div_max_B = divergence_max(state.b);
  return r;
}

/// Total pressure p + |B|^2/2 from -Lap p_total = div((u.grad)u - (B.grad)B),
/// zero mean.  The momentum forcing (B.grad)B - (u.grad)u - grad p_total is
/// then solenoidal.
template <typename Scalar>
ScalarSpectralField<Scalar> recover_pressure(const SpectralField<Scalar>& u,
                                             const SpectralField<Scalar>& b,
                                             OperatorContext<Scalar>& ctx) {
  const auto flux = ctx.advect(u, u) - ctx.advect(b, b);
  const auto& grid = ctx.grid();
  const auto& kappa = grid.kappa();
  const std::complex<Scalar> I(0, 1);
  ScalarSpectralField<Scalar> p(ctx.grid_ptr());
  p.coeffs().col(0).array() =
      I *
      (flux.coeffs().col(0).array() * kappa.col(0) + flux.coeffs().col(1).array() * kappa.col(1) +
       flux.coeffs().col(2).array() * kappa.col(2)) *
      grid.inv_kappa_sq();
  return p;
}

template <typename Scalar>
ScalarSpectralField<Scalar> recover_pressure(const SpectralField<Scalar>& u,
                                             const SpectralField<Scalar>& b) {
  OperatorContext<Scalar> ctx(u.grid_ptr(), Scalar(0));
  return recover_pressure(u, b, ctx);
}

/// grad p as a vector field.
template <typename Scalar>
SpectralField<Scalar> gradient(const ScalarSpectralField<Scalar>& p) {
  SpectralField<Scalar> g(p.grid_ptr());
  const std::complex<Scalar> I(0, 1);
  for (int d = 0; d < 3; ++d) {
    g.coeffs().col(d).array() = I * p.coeffs().col(0).array() * p.grid().kappa().col(d);
  }
  return g;
}

/// Shell-summed energy spectrum E(k) = 1/2 sum |coeff|^2 over modes with
/// round(|k|) = k, k in integer wavenumber units.
template <typename Scalar>
std::vector<Scalar> energy_spectrum(const SpectralField<Scalar>& f) {
  const auto& grid = f.grid();
  const int shells = int(std::ceil(std::sqrt(3.0) * grid.n() / 2)) + 1;
  std::vector<Scalar> e(std::size_t(shells), Scalar(0));
  for (Index idx = 0; idx < grid.size(); ++idx) {
    const double k = grid.wavevector(idx).template cast<double>().norm();
    e[std::size_t(std::lround(k))] += f.coeffs().row(idx).squaredNorm() / 2;
  }
  while (e.size() > 1 && e.back() == Scalar(0)) e.pop_back();
  return e;
}

/// Diagnostics CSV: fixed column order, 17 significant digits.
void write_csv_header(std::ostream& out);
void write_csv_row(std::ostream& out, const DiagRecord<double>& r);

}  // namespace mhdv
