#pragma once

#include "mhdv/diagnostics.hpp"
#include "mhdv/errors.hpp"
#include "mhdv/operators.hpp"
#include "mhdv/state.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace mhdv {

/// CFL step: cfl_safety * dx / (max|u| + max|B| + 1e-30), capped at dt_max.
/// With the integrating factor off, the explicit diffusion limit
/// cfl_safety / (mu |kappa_max|^2) also applies.
template <typename Scalar>
Scalar cfl_dt(const SimState<Scalar>& state, const SimParams& params, OperatorContext<Scalar>& ctx) {
  const Scalar speed = ctx.max_magnitude(state.u) + ctx.max_magnitude(state.b) + Scalar(1e-30);
  Scalar dt = Scalar(params.cfl_safety) * ctx.grid().dx() / speed;
  dt = std::min(dt, Scalar(params.dt_max));
  if (!params.integrating_factor) {
    const Scalar stiff = Scalar(std::max(params.mu, params.nu)) * ctx.grid().kappa_sq_max();
    if (stiff > 0) dt = std::min(dt, Scalar(params.cfl_safety) / stiff);
  }
  return dt;
}

/// One step of classical RK4 on the Galerkin system, with the linear
/// dissipative terms integrated exactly per mode (Lawson integrating
/// factor exp(-mu |kappa|^2 dt) for B, and the filtered viscous rate for u).
///
/// Alongside the state the step integrates the dissipation rate
/// 2 mu ||B||^2 + 2 nu ||u||^2 through the same RK4 stages, so the running
/// energy budget is accurate to the order of the scheme.
template <typename Scalar>
class Stepper {
 public:
  using Field = SpectralField<Scalar>;
  using RealArray = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

  Stepper(GridPtr<Scalar> grid, const SimParams& params)
      : ctx_(grid, Scalar(params.alpha)),
        mu_(Scalar(params.mu)),
        nu_(Scalar(params.nu)),
        integrating_factor_(params.integrating_factor) {
    const auto& k2 = grid->kappa_sq();
    const Scalar a2 = Scalar(params.alpha * params.alpha);
    rate_u_ = -nu_ * k2 / (Scalar(1) + a2 * k2);
    rate_b_ = -mu_ * k2;
  }

  OperatorContext<Scalar>& context() { return ctx_; }

  Scalar dissipation_rate(const Field& u, const Field& b) const {
    Scalar rate = 0;
    if (mu_ != 0) rate += 2 * mu_ * sobolev_norm_sq(b, Scalar(1));
    if (nu_ != 0) rate += 2 * nu_ * sobolev_norm_sq(u, Scalar(1));
    return rate;
  }

  /// Dissipation integrated over the most recent step.
  Scalar last_dissipation() const { return last_dissipation_; }

  SimState<Scalar> step(const SimState<Scalar>& s, Scalar dt) {
    if (!(dt > 0)) throw ValidationError("time step must be > 0");
    update_factors(dt);
    const Scalar h = dt, h2 = dt / 2;

    auto [k1u, k1b] = rhs(s.u, s.b);
    const Field y2u = stage(s.u, half_u_, k1u, h2, &half_u_);
    const Field y2b = stage(s.b, half_b_, k1b, h2, &half_b_);
    auto [k2u, k2b] = rhs(y2u, y2b);
    const Field y3u = stage(s.u, half_u_, k2u, h2, nullptr);
    const Field y3b = stage(s.b, half_b_, k2b, h2, nullptr);
    auto [k3u, k3b] = rhs(y3u, y3b);
    const Field y4u = stage(s.u, full_u_, k3u, h, &half_u_);
    const Field y4b = stage(s.b, full_b_, k3b, h, &half_b_);
    auto [k4u, k4b] = rhs(y4u, y4b);

    last_dissipation_ = h / 6 *
                        (dissipation_rate(s.u, s.b) + 2 * dissipation_rate(y2u, y2b) +
                         2 * dissipation_rate(y3u, y3b) + dissipation_rate(y4u, y4b));

    SimState<Scalar> next;
    next.u = combine(s.u, k1u, k2u, k3u, k4u, h, full_u_, half_u_);
    next.b = combine(s.b, k1b, k2b, k3b, k4b, h, full_b_, half_b_);
    next.t = s.t + dt;
    next.step_index = s.step_index + 1;

    if (!next.u.coeffs().allFinite() || !next.b.coeffs().allFinite()) {
      throw NumericalBlowup("numerical blow-up at step " + std::to_string(next.step_index),
                            next.step_index);
    }
    return next;
  }

 private:
  using Factor = Eigen::Array<std::complex<Scalar>, Eigen::Dynamic, 1>;

  std::pair<Field, Field> rhs(const Field& u, const Field& b) {
    if (integrating_factor_) return ctx_.nonlinear_rhs(u, b);
    return ctx_.mhd_rhs(u, b, mu_, nu_);
  }

  void update_factors(Scalar dt) {
    if (cached_dt_ && *cached_dt_ == dt) return;
    cached_dt_ = dt;
    const Scalar on = integrating_factor_ ? Scalar(1) : Scalar(0);
    half_u_ = (rate_u_ * (on * dt / 2)).exp().template cast<std::complex<Scalar>>();
    full_u_ = (rate_u_ * (on * dt)).exp().template cast<std::complex<Scalar>>();
    half_b_ = (rate_b_ * (on * dt / 2)).exp().template cast<std::complex<Scalar>>();
    full_b_ = (rate_b_ * (on * dt)).exp().template cast<std::complex<Scalar>>();
  }

  /// E_y y + c E_k k, with E_k = I when null.
  static Field stage(const Field& y, const Factor& ey, const Field& k, Scalar c, const Factor* ek) {
    Field out(y.grid_ptr());
    if (ek) {
      out.coeffs().array() = y.coeffs().array().colwise() * ey +
                             (k.coeffs().array() * c).colwise() * (*ek);
    } else {
      out.coeffs().array() = y.coeffs().array().colwise() * ey + k.coeffs().array() * c;
    }
    out.set_divfree(true);
    return out;
  }

  // y_{n+1} = E(h) y_n + h/6 (E(h) k1 + 2 E(h/2)(k2 + k3) + k4)
  static Field combine(const Field& y, const Field& k1, const Field& k2, const Field& k3,
                       const Field& k4, Scalar h, const Factor& full, const Factor& half) {
    Field out(y.grid_ptr());
    out.coeffs().array() =
        y.coeffs().array().colwise() * full +
        (k1.coeffs().array().colwise() * full +
         ((k2.coeffs().array() + k3.coeffs().array()) * Scalar(2)).colwise() * half +
         k4.coeffs().array()) *
            (h / 6);
    out.set_divfree(true);
    return out;
  }

  OperatorContext<Scalar> ctx_;
  Scalar mu_, nu_;
  bool integrating_factor_;
  RealArray rate_u_, rate_b_;
  Factor half_u_, full_u_, half_b_, full_b_;
  std::optional<Scalar> cached_dt_;
  Scalar last_dissipation_ = 0;
};

/// A run in progress: state, stepper and the running energy budget.
template <typename Scalar>
class Simulation {
 public:
  Simulation(SimParams params, SimState<Scalar> initial)
      : params_(std::move(params)),
        stepper_(initial.u.grid_ptr(), params_),
        state_(std::move(initial)) {
    initial_energy_ = voigt_energy(state_.u, state_.b, Scalar(params_.alpha));
  }

  /// Resume with a previously accumulated budget.
  Simulation(SimParams params, SimState<Scalar> state, Scalar initial_energy, Scalar dissipated)
      : params_(std::move(params)),
        stepper_(state.u.grid_ptr(), params_),
        state_(std::move(state)),
        initial_energy_(initial_energy),
        dissipated_(dissipated) {}

  const SimParams& params() const { return params_; }
  const SimState<Scalar>& state() const { return state_; }
  Scalar initial_energy() const { return initial_energy_; }
  Scalar dissipated() const { return dissipated_; }
  Stepper<Scalar>& stepper() { return stepper_; }

  bool finished() const { return !(state_.t < Scalar(params_.t_end)); }

  /// Fixed or CFL step, shortened so the run lands exactly on t_end.
  Scalar next_dt() {
    Scalar dt = params_.dt ? Scalar(*params_.dt) : cfl_dt(state_, params_, stepper_.context());
    if (!params_.dt && dt < Scalar(params_.dt_min)) {
      throw NumericalBlowup("time step collapsed to " + std::to_string(double(dt)) + " at step " +
                                std::to_string(state_.step_index),
                            state_.step_index);
    }
    const Scalar remaining = Scalar(params_.t_end) - state_.t;
    if (remaining - dt < Scalar(1e-9) * dt) dt = remaining;
    return dt;
  }

  /// A step that ends within 1e-9 dt of t_end snaps the clock onto t_end.
  void advance(Scalar dt) {
    auto next = stepper_.step(state_, dt);
    if (std::abs(Scalar(params_.t_end) - next.t) <= Scalar(1e-9) * dt) next.t = Scalar(params_.t_end);
    dissipated_ += stepper_.last_dissipation();
    state_ = std::move(next);
  }

  DiagRecord<Scalar> record(const std::vector<double>& hs_set = default_hs_set()) const {
    return mhdv::record(state_, params_, dissipated_, initial_energy_, hs_set);
  }

  /// Energy budget check: voigt_energy + dissipated <= (K1_alpha)^2 within tolerance.
  void check_bound(const DiagRecord<Scalar>& r) const {
    const Scalar excess = r.voigt_energy + r.dissipated - initial_energy_;
    const Scalar slack = Scalar(params_.bound_tolerance) * std::max(initial_energy_, Scalar(1e-300));
    if (excess > slack) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "energy budget exceeded at t=%.6g: excess %.3e > tolerance %.3e",
                    double(r.t), double(excess), double(slack));
      throw BoundViolation(buf);
    }
  }

 private:
  SimParams params_;
  Stepper<Scalar> stepper_;
  SimState<Scalar> state_;
  Scalar initial_energy_ = 0;
  Scalar dissipated_ = 0;
};

/// Saved budget needed to continue a run from a checkpoint.
template <typename Scalar>
struct ResumePoint {
  SimState<Scalar> state;
  Scalar initial_energy = 0;
  Scalar dissipated = 0;
};

template <typename Scalar>
struct RunCallbacks {
  std::function<void(const DiagRecord<Scalar>&)> on_record;
  std::function<void(const SimState<Scalar>&)> on_snapshot;
  std::function<void(const ResumePoint<Scalar>&)> on_checkpoint;
  long diag_interval = 1;
  long snapshot_interval = 0;    ///< 0 disables
  long checkpoint_interval = 0;  ///< 0 disables
  /// Stop after this many steps of the current invocation (0: run to t_end).
  long max_steps = 0;
  std::vector<double> hs_set = default_hs_set();
};

/// Integrate to t_end.  Records are emitted at step 0 (fresh runs only),
/// every diag_interval steps and at the final step; every record is
/// checked against the energy budget.
template <typename Scalar>
SimState<Scalar> run(const SimParams& params, const RunCallbacks<Scalar>& callbacks,
                     std::optional<ResumePoint<Scalar>> resume = std::nullopt) {
  params.validate();
  std::optional<Simulation<Scalar>> sim;
  if (resume) {
    sim.emplace(params, std::move(resume->state), resume->initial_energy, resume->dissipated);
  } else {
    sim.emplace(params, initial_state<Scalar>(params));
  }
  auto emit = [&] {
    auto r = sim->record(callbacks.hs_set);
    sim->check_bound(r);
    if (callbacks.on_record) callbacks.on_record(r);
  };
  auto due = [&](long interval) {
    return interval > 0 && sim->state().step_index % interval == 0;
  };
  if (!resume) emit();
  long taken = 0;
  while (!sim->finished()) {
    if (callbacks.max_steps > 0 && taken++ == callbacks.max_steps) break;
    sim->advance(sim->next_dt());
    const bool last = sim->finished();
    if (due(callbacks.diag_interval) || last) emit();
    if (callbacks.on_snapshot && due(callbacks.snapshot_interval)) {
      callbacks.on_snapshot(sim->state());
    }
    if (callbacks.on_checkpoint && due(callbacks.checkpoint_interval)) {
      callbacks.on_checkpoint({sim->state(), sim->initial_energy(), sim->dissipated()});
    }
  }
  return sim->state();
}

}  // namespace mhdv
