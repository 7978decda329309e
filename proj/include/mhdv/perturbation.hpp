#pragma once

#include "mhdv/fitting.hpp"
#include "mhdv/timestepper.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

namespace mhdv {

/// Growth of the difference between two runs,
/// delta_energy = |du|^2 + alpha^2 ||du||^2 + |dB|^2.
struct PerturbationReport {
  std::vector<double> t;
  std::vector<double> delta_energy;
  double rate = 0;  ///< least-squares exponential rate
  /// max over samples of delta_energy(t) / (delta_energy(0) exp(rate t)); 0 if delta_energy(0) = 0
  double envelope_ratio_max = 0;
};

template <typename Scalar>
Scalar delta_energy(const SimState<Scalar>& a, const SimState<Scalar>& b, Scalar alpha) {
  return voigt_energy(a.u - b.u, a.b - b.b, alpha);
}

/// Advance both initial pairs side by side on the same step sequence (fixed,
/// or the CFL step of the first run) up to `t_end` and sample delta_energy
/// every `sample_interval` steps and at the end.
template <typename Scalar = double>
PerturbationReport continuous_dependence_check(
    SimParams params, std::pair<SpectralField<Scalar>, SpectralField<Scalar>> ic_a,
    std::pair<SpectralField<Scalar>, SpectralField<Scalar>> ic_b, double t_end,
    long sample_interval = 1) {
  params.t_end = t_end;
  params.validate();
  require_same_grid(ic_a.first, ic_b.first);
  require_same_grid(ic_a.second, ic_b.second);
  if (sample_interval < 1) throw ValidationError("sample_interval must be >= 1");

  Simulation<Scalar> a(params, {std::move(ic_a.first), std::move(ic_a.second), 0, 0});
  Simulation<Scalar> b(params, {std::move(ic_b.first), std::move(ic_b.second), 0, 0});
  const Scalar alpha = Scalar(params.alpha);

  PerturbationReport report;
  auto sample = [&] {
    report.t.push_back(double(a.state().t));
    report.delta_energy.push_back(double(delta_energy(a.state(), b.state(), alpha)));
  };
  sample();
  while (!a.finished()) {
    const Scalar dt = a.next_dt();
    a.advance(dt);
    b.advance(dt);
    if (a.state().step_index % sample_interval == 0 || a.finished()) sample();
  }

  const double d0 = report.delta_energy.front();
  report.rate = fit_exponential_rate(report.t, report.delta_energy, d0);
  if (!std::isfinite(report.rate)) throw RuntimeAbort("perturbation growth rate is not finite");
  if (d0 > 0) {
    for (std::size_t i = 0; i < report.t.size(); ++i) {
      const double envelope = d0 * std::exp(report.rate * report.t[i]);
      report.envelope_ratio_max = std::max(report.envelope_ratio_max, report.delta_energy[i] / envelope);
    }
  }
  return report;
}

}  // namespace mhdv
