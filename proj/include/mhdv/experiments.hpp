#pragma once

#include "mhdv/errors.hpp"
#include "mhdv/fitting.hpp"
#include "mhdv/timestepper.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace mhdv {

struct ErrorSample {
  double t = 0;
  double e_u = 0;       ///< |u^a - u|
  double e_uV = 0;      ///< ||u^a - u||
  double e_B = 0;       ///< |B^a - B|
  double e_BV_int = 0;  ///< (int_0^t ||B^a - B||^2)^{1/2}, trapezoidal
  double indicator = 0; ///< a^2 ||u^a||^2
};

/// Errors of each regularized run against the reference run at matched times.
struct SweepReport {
  std::vector<double> alphas;  ///< strictly decreasing
  double reference_alpha = 0;
  double dt = 0;
  std::vector<double> times;
  std::vector<std::vector<ErrorSample>> curves;  ///< [alpha][sample]
  std::vector<double> sup_e_u, sup_e_uV, sup_e_B, e_BV_int;
  /// Log-log fits of the sup errors against alpha; empty with fewer than
  /// three alphas or a nonpositive error.
  std::optional<LogLogFit> slope_e_u, slope_e_uV, slope_e_B, slope_e_BV_int;
  /// With SweepOptions::refine_check: L2 distance at T between the reference
  /// and the same reference recomputed on a 2n grid (the discretization
  /// error to compare against the alpha signal).
  std::optional<double> refinement_gap;

  std::vector<std::vector<double>> indicator_matrix() const;
};

struct SweepOptions {
  double reference_alpha = 0.0;
  long sample_interval = 1;
  bool refine_check = false;
};

/// Power-law analysis of I(alpha, t) = alpha^2 ||u^alpha(t)||^2.
struct BlowupScanReport {
  std::vector<double> alphas;
  std::vector<double> times;
  std::vector<std::vector<double>> indicator;  ///< [alpha][sample]; NaN after an abort
  std::vector<double> exponent;                ///< p(t) in I ~ c alpha^p; NaN if no fit
  std::vector<double> prefactor;               ///< c(t)
  std::vector<double> r2;
  std::vector<double> limit;  ///< extrapolated alpha -> 0 value of c alpha^p
  double min_exponent = std::numeric_limits<double>::quiet_NaN();
  bool indicates_singularity = false;
  std::vector<std::pair<double, std::string>> failures;  ///< per-alpha aborts
  bool outside_strong_theory = false;                    ///< mu = 0

  std::string verdict() const;
};

struct BlowupOptions {
  long sample_interval = 1;
  /// |p| below this counts as a nonvanishing limit.
  double flat_exponent = 0.5;
};

std::string format_alpha(double alpha);

void check_alpha_list(const std::vector<double>& alphas, std::size_t minimum);

/// Fit I(alpha, t) per sample and derive the extrapolated limit and flag.
BlowupScanReport analyze_indicator(std::vector<double> alphas, std::vector<double> times,
                                   std::vector<std::vector<double>> indicator,
                                   const BlowupOptions& options = {});

namespace detail {

inline std::optional<LogLogFit> maybe_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() < 3) return std::nullopt;
  for (double y : ys) {
    if (!(y > 0) || !std::isfinite(y)) return std::nullopt;
  }
  return fit_loglog_slope(xs, ys);
}

template <typename Scalar>
SimParams with_alpha(SimParams p, double alpha, double dt) {
  p.alpha = alpha;
  p.dt = dt;
  return p;
}

/// The step size shared by every run: params.dt, or the CFL step of the
/// initial data.
template <typename Scalar>
double shared_dt(const SimParams& base, const SimState<Scalar>& initial) {
  if (base.dt) return *base.dt;
  OperatorContext<Scalar> ctx(initial.u.grid_ptr(), Scalar(0));
  return double(cfl_dt(initial, base, ctx));
}

/// Zero-pad a field onto a finer grid.
template <typename Scalar>
SpectralField<Scalar> prolong(const SpectralField<Scalar>& f, const GridPtr<Scalar>& fine) {
  SpectralField<Scalar> out(fine);
  const auto& coarse = f.grid();
  for (Index i = 0; i < coarse.size(); ++i) {
    if (!coarse.dealias_mask()[i]) continue;
    out.coeffs().row(fine->index_of(coarse.wavevector(i))) = f.coeffs().row(i);
  }
  out.set_divfree(f.divfree());
  return out;
}

}  // namespace detail

/// Alpha -> 0 convergence study.  Every alpha and the reference
/// (options.reference_alpha, 0 by default) start from the same initial data
/// and advance in lockstep with a common fixed step, so errors are taken at
/// identical times.  Each run's energy budget is checked at every sample.
template <typename Scalar = double>
SweepReport alpha_sweep(const SimParams& base, const std::vector<double>& alphas,
                        const SweepOptions& options = {}) {
  check_alpha_list(alphas, 1);
  if (!(base.mu > 0)) throw ValidationError("alpha sweep requires mu > 0");
  if (options.sample_interval < 1) throw ValidationError("sample_interval must be >= 1");
  const auto initial = initial_state<Scalar>(base);
  const double dt = detail::shared_dt(base, initial);

  auto ref_params = detail::with_alpha<Scalar>(base, options.reference_alpha, dt);
  ref_params.validate();
  Simulation<Scalar> reference(ref_params, initial);
  std::vector<Simulation<Scalar>> runs;
  runs.reserve(alphas.size());
  for (double a : alphas) {
    auto p = detail::with_alpha<Scalar>(base, a, dt);
    p.validate();
    runs.emplace_back(p, initial);
  }

  SweepReport report;
  report.alphas = alphas;
  report.reference_alpha = options.reference_alpha;
  report.dt = dt;
  report.curves.resize(alphas.size());
  std::vector<double> bv_sq(alphas.size(), 0.0), last_bv(alphas.size(), 0.0);
  double last_t = 0;

  auto sample = [&] {
    const double t = double(reference.state().t);
    report.times.push_back(t);
    reference.check_bound(reference.record());
    for (std::size_t i = 0; i < runs.size(); ++i) {
      const auto& s = runs[i].state();
      runs[i].check_bound(runs[i].record());
      const auto du = s.u - reference.state().u;
      const auto db = s.b - reference.state().b;
      const double bv = double(sobolev_norm_sq(db, Scalar(1)));
      if (report.times.size() > 1) bv_sq[i] += 0.5 * (t - last_t) * (bv + last_bv[i]);
      last_bv[i] = bv;
      ErrorSample e;
      e.t = t;
      e.e_u = double(l2_norm(du));
      e.e_uV = double(h1_norm(du));
      e.e_B = double(l2_norm(db));
      e.e_BV_int = std::sqrt(bv_sq[i]);
      e.indicator = alphas[i] * alphas[i] * double(sobolev_norm_sq(s.u, Scalar(1)));
      report.curves[i].push_back(e);
    }
    last_t = t;
  };

  sample();
  while (!reference.finished()) {
    const Scalar step = reference.next_dt();
    try {
      reference.advance(step);
    } catch (const NumericalBlowup&) {
      throw RuntimeAbort("reference solution lost smoothness before T — shrink T");
    }
    for (auto& r : runs) r.advance(step);
    if (reference.state().step_index % options.sample_interval == 0 || reference.finished()) {
      sample();
    }
  }

  for (const auto& curve : report.curves) {
    double su = 0, suv = 0, sb = 0;
    for (const auto& e : curve) {
      su = std::max(su, e.e_u);
      suv = std::max(suv, e.e_uV);
      sb = std::max(sb, e.e_B);
    }
    report.sup_e_u.push_back(su);
    report.sup_e_uV.push_back(suv);
    report.sup_e_B.push_back(sb);
    report.e_BV_int.push_back(curve.back().e_BV_int);
  }
  report.slope_e_u = detail::maybe_fit(alphas, report.sup_e_u);
  report.slope_e_uV = detail::maybe_fit(alphas, report.sup_e_uV);
  report.slope_e_B = detail::maybe_fit(alphas, report.sup_e_B);
  report.slope_e_BV_int = detail::maybe_fit(alphas, report.e_BV_int);

  if (options.refine_check) {
    auto fine_params = ref_params;
    fine_params.n = 2 * base.n;
    const auto fine_grid = make_grid<Scalar>(fine_params.n);
    SimState<Scalar> fine_initial{detail::prolong(initial.u, fine_grid), detail::prolong(initial.b, fine_grid)};
    Simulation<Scalar> fine(fine_params, std::move(fine_initial));
    while (!fine.finished()) fine.advance(fine.next_dt());
    const auto& c = reference.state();
    const double du = double(l2_norm(fine.state().u - detail::prolong(c.u, fine_grid)));
    const double db = double(l2_norm(fine.state().b - detail::prolong(c.b, fine_grid)));
    report.refinement_gap = std::sqrt(du * du + db * db);
  }
  return report;
}

/// Blow-up criterion scan: run every alpha to t_star from the same initial
/// data and fit I(alpha, t) ~ c(t) alpha^p(t).  A run that aborts is recorded
/// and dropped; the others continue.  The flag is an indicator only.
template <typename Scalar = double>
BlowupScanReport blowup_scan(const SimParams& base, const std::vector<double>& alphas, double t_star,
                             const BlowupOptions& options = {}) {
  check_alpha_list(alphas, 3);
  if (!(t_star > 0)) throw ValidationError("t_star must be > 0");
  if (options.sample_interval < 1) throw ValidationError("sample_interval must be >= 1");
  SimParams params = base;
  params.t_end = t_star;
  const auto initial = initial_state<Scalar>(params);
  const double dt = detail::shared_dt(params, initial);

  std::vector<std::optional<Simulation<Scalar>>> runs;
  for (double a : alphas) {
    auto p = detail::with_alpha<Scalar>(params, a, dt);
    p.validate();
    runs.emplace_back(std::in_place, p, initial);
  }
  std::vector<std::pair<double, std::string>> failures;
  std::vector<double> times;
  std::vector<std::vector<double>> indicator(alphas.size());
  const double nan = std::numeric_limits<double>::quiet_NaN();

  auto sample = [&](double t) {
    times.push_back(t);
    for (std::size_t i = 0; i < runs.size(); ++i) {
      double value = nan;
      if (runs[i]) {
        const auto r = runs[i]->record();
        try {
          runs[i]->check_bound(r);
          value = double(r.blowup_indicator);
        } catch (const RuntimeAbort& e) {
          failures.emplace_back(alphas[i], e.what());
          runs[i].reset();
        }
      }
      indicator[i].push_back(value);
    }
  };

  Scalar t = 0;
  long step = 0;
  sample(0.0);
  const Scalar t_end = Scalar(t_star);
  while (t < t_end) {
    Scalar h = Scalar(dt);
    if (t_end - t - h < Scalar(1e-9) * h) h = t_end - t;
    for (std::size_t i = 0; i < runs.size(); ++i) {
      if (!runs[i]) continue;
      try {
        runs[i]->advance(h);
      } catch (const RuntimeAbort& e) {
        failures.emplace_back(alphas[i], e.what());
        runs[i].reset();
      }
    }
    t += h;
    if (std::abs(t_end - t) <= Scalar(1e-9) * h) t = t_end;
    ++step;
    if (step % options.sample_interval == 0 || !(t < t_end)) sample(double(t));
  }

  auto report = analyze_indicator(alphas, std::move(times), std::move(indicator), options);
  report.failures = std::move(failures);
  report.outside_strong_theory = base.mu == 0.0;
  return report;
}

}  // namespace mhdv
