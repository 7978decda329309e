#pragma once

#include "mhdv/fields.hpp"
#include "mhdv/spectral_fields.hpp"

#include <cstdint>
#include <optional>

namespace mhdv {

/// Physical and numerical parameters of one run.
struct SimParams {
  double alpha = 0.0;  ///< Voigt length scale
  double mu = 0.0;     ///< resistivity
  double nu = 0.0;     ///< viscosity
  int n = 32;
  std::optional<double> dt;  ///< fixed step; unset selects the CFL step
  double dt_max = 0.05;
  double dt_min = 1e-10;  ///< a CFL step below this aborts the run
  double t_end = 1.0;
  double cfl_safety = 0.5;
  IcSpec ic;
  /// Required for alpha = 0 runs without resistivity: t_end must not exceed it.
  std::optional<double> smoothness_horizon;
  /// Integrate -mu A B (and the viscous term) exactly per mode.
  bool integrating_factor = true;
  /// Relative slack allowed on the energy budget at every diagnostic instant.
  double bound_tolerance = 1e-8;

  /// alpha = 0: the run is the unregularized resistive MHD reference.
  bool reference_mhd() const { return alpha == 0.0; }

  /// Throws ValidationError naming the first offending field.
  void validate() const;
};

template <typename Scalar>
struct SimState {
  SpectralField<Scalar> u;
  SpectralField<Scalar> b;
  Scalar t = 0;
  std::int64_t step_index = 0;
};

template <typename Scalar>
SimState<Scalar> initial_state(const SimParams& params, const GridPtr<Scalar>& grid) {
  auto [u, b] = make_ic<Scalar>(params.ic, grid);
  return {std::move(u), std::move(b), Scalar(0), 0};
}

template <typename Scalar>
SimState<Scalar> initial_state(const SimParams& params) {
  return initial_state<Scalar>(params, make_grid<Scalar>(params.n));
}

}  // namespace mhdv
