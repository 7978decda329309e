#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mhdv/timestepper.hpp"

#include <numbers>

using namespace mhdv;
using doctest::Approx;

namespace {

constexpr double two_pi = 2 * std::numbers::pi;

double max_abs(const SpectralField<double>& f) { return f.coeffs().cwiseAbs().maxCoeff(); }

SimParams base(IcKind kind, int n = 16) {
  SimParams p;
  p.n = n;
  p.alpha = 0.1;
  p.mu = 0.02;
  p.t_end = 0.1;
  p.dt = 0.01;
  p.ic.kind = kind;
  return p;
}

SimState<double> integrate(const SimParams& p) {
  Simulation<double> sim(p, initial_state<double>(p));
  while (!sim.finished()) sim.advance(sim.next_dt());
  return sim.state();
}

}  // namespace

TEST_CASE("single magnetic mode decays at the resistive rate") {
  auto p = base(IcKind::single_mode_b, 8);
  p.mu = 0.01;
  p.dt = 0.05;
  p.t_end = 1.0;
  const auto s = integrate(p);
  const double expected = 0.5 * std::exp(-p.mu * two_pi * two_pi * s.t);
  auto grid = s.b.grid_ptr();
  CHECK(s.b(grid->index_of(1, 0, 0), 1).real() == Approx(expected).epsilon(1e-14));
  CHECK(max_abs(s.u) == 0.0);
}

TEST_CASE("without the integrating factor the scheme is still fourth order") {
  auto p = base(IcKind::single_mode_b, 8);
  p.mu = 0.05;
  p.t_end = 0.5;
  p.integrating_factor = false;
  auto err = [&](double dt) {
    p.dt = dt;
    const auto s = integrate(p);
    const double exact = 0.5 * std::exp(-p.mu * two_pi * two_pi * s.t);
    return std::abs(s.b(s.b.grid().index_of(1, 0, 0), 1).real() - exact);
  };
  const double ratio = err(0.05) / err(0.025);
  CHECK(ratio > 14.0);
  CHECK(ratio < 18.0);
}

TEST_CASE("time step order on a nonlinear run") {
  auto p = base(IcKind::taylor_green);
  p.ic.b_amplitude = 0.5;
  p.t_end = 0.2;
  p.dt = 0.00125;
  const auto ref = integrate(p);
  auto err = [&](double dt) {
    p.dt = dt;
    const auto s = integrate(p);
    return l2_norm(s.u - ref.u) + l2_norm(s.b - ref.b);
  };
  const double ratio = err(0.02) / err(0.01);
  CHECK(ratio > 13.0);
  CHECK(ratio < 19.0);
}

TEST_CASE("stationary states") {
  SUBCASE("Elsasser") {
    auto p = base(IcKind::elsasser);
    p.mu = 0;
    const auto s0 = initial_state<double>(p);
    const auto s = integrate(p);
    CHECK(max_abs(s.u - s0.u) == 0.0);
    CHECK(max_abs(s.b - s0.b) == 0.0);
  }
  SUBCASE("ABC") {
    auto p = base(IcKind::abc);
    p.mu = 0;
    p.alpha = 0.0;
    p.smoothness_horizon = 1.0;
    const auto s0 = initial_state<double>(p);
    CHECK(max_abs(integrate(p).u - s0.u) < 1e-13);
  }
}

TEST_CASE("the clock lands on t_end") {
  auto p = base(IcKind::taylor_green);
  p.dt = 0.03;
  const auto s = integrate(p);
  CHECK(s.t == 0.1);
  CHECK(s.step_index == 4);

  p.t_end = 0.0;
  Simulation<double> sim(p, initial_state<double>(p));
  CHECK(sim.finished());
}

TEST_CASE("CFL step") {
  auto p = base(IcKind::abc);
  p.dt.reset();
  p.cfl_safety = 0.5;
  const auto s = initial_state<double>(p);
  OperatorContext<double> ctx(s.u.grid_ptr(), 0.1);
  // max |ABC| = sqrt(6) at x = y = z = 1/8, a grid point
  const double speed = ctx.max_magnitude(s.u);
  CHECK(speed == Approx(std::sqrt(6.0)).epsilon(1e-13));
  CHECK(cfl_dt(s, p, ctx) == Approx(0.5 / 16 / speed));
  p.dt_max = 1e-3;
  CHECK(cfl_dt(s, p, ctx) == 1e-3);
}

TEST_CASE("a collapsed CFL step aborts the run") {
  auto p = base(IcKind::taylor_green);
  p.dt.reset();
  p.dt_min = 1.0;
  Simulation<double> sim(p, initial_state<double>(p));
  CHECK_THROWS_AS(sim.next_dt(), NumericalBlowup);
}

TEST_CASE("non-finite state aborts with the step index") {
  auto p = base(IcKind::taylor_green);
  auto s = initial_state<double>(p);
  s.u(s.u.grid().index_of(1, 1, 1), 0) = std::numeric_limits<double>::quiet_NaN();
  Stepper<double> stepper(s.u.grid_ptr(), p);
  try {
    stepper.step(s, 0.01);
    FAIL("expected an abort");
  } catch (const NumericalBlowup& e) {
    CHECK(e.step() == 1);
    CHECK(std::string(e.what()) == "numerical blow-up at step 1");
  }
}

TEST_CASE("energy budget check") {
  auto p = base(IcKind::taylor_green);
  p.ic.b_amplitude = 0.5;
  Simulation<double> sim(p, initial_state<double>(p));
  auto r = sim.record();
  CHECK_NOTHROW(sim.check_bound(r));
  r.voigt_energy *= 1.0 + 1e-6;
  CHECK_THROWS_AS(sim.check_bound(r), BoundViolation);
}

TEST_CASE("run emits records and honours the intervals") {
  auto p = base(IcKind::taylor_green);
  RunCallbacks<double> cb;
  std::vector<double> times;
  int snaps = 0, checkpoints = 0;
  cb.on_record = [&](const DiagRecord<double>& r) { times.push_back(r.t); };
  cb.on_snapshot = [&](const SimState<double>&) { ++snaps; };
  cb.on_checkpoint = [&](const ResumePoint<double>&) { ++checkpoints; };
  cb.diag_interval = 3;
  cb.snapshot_interval = 5;
  cb.checkpoint_interval = 2;
  const auto s = run<double>(p, cb);
  CHECK(s.step_index == 10);
  CHECK(times.size() == 5);  // 0, 3, 6, 9, final
  CHECK(times.back() == s.t);
  CHECK(snaps == 2);
  CHECK(checkpoints == 5);

  cb.max_steps = 4;
  CHECK(run<double>(p, cb).step_index == 4);
}

TEST_CASE("resuming reproduces the uninterrupted run bit for bit") {
  auto p = base(IcKind::taylor_green);
  p.ic.b_amplitude = 0.5;
  p.dt.reset();
  p.cfl_safety = 0.1;  // keeps RK4's energy error inside the budget tolerance
  RunCallbacks<double> cb;
  std::optional<ResumePoint<double>> mid;
  cb.on_checkpoint = [&](const ResumePoint<double>& r) {
    if (!mid) mid = r;
  };
  cb.checkpoint_interval = 3;
  const auto full = run<double>(p, cb);
  REQUIRE(mid);
  const auto resumed = run<double>(p, {}, *mid);
  CHECK(resumed.u.coeffs() == full.u.coeffs());
  CHECK(resumed.b.coeffs() == full.b.coeffs());
  CHECK(resumed.t == full.t);
}

TEST_CASE("parameter validation") {
  SimParams p;
  p.mu = 0.01;
  CHECK_NOTHROW(p.validate());
  p.alpha = -1;
  CHECK_THROWS_WITH_AS(p.validate(), "alpha must be >= 0", ValidationError);
  p.alpha = 0;
  p.mu = 0;
  CHECK_THROWS_AS(p.validate(), ValidationError);
  p.smoothness_horizon = 2.0;
  CHECK_NOTHROW(p.validate());
  p.t_end = 3.0;
  CHECK_THROWS_AS(p.validate(), ValidationError);
  p = SimParams{};
  p.alpha = 0.1;
  p.cfl_safety = 1.5;
  CHECK_THROWS_AS(p.validate(), ValidationError);
}
