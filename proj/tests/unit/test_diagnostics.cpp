#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mhdv/diagnostics.hpp"
#include "mhdv/fitting.hpp"
#include "mhdv/perturbation.hpp"
#include "mhdv/verify.hpp"

#include <numbers>
#include <sstream>

using namespace mhdv;
using doctest::Approx;

namespace {

constexpr double two_pi = 2 * std::numbers::pi;

double max_abs(const SpectralField<double>& f) { return f.coeffs().cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("record of Taylor-Green data") {
  SimParams p;
  p.n = 16;
  p.alpha = 0.2;
  p.mu = 0.01;
  p.ic.b_amplitude = 2.0;
  const auto s = initial_state<double>(p);
  const auto r = record(s, p, 0.0, voigt_energy(s.u, s.b, 0.2));
  const double h1 = 0.5 * two_pi * std::sqrt(3.0);
  CHECK(r.l2_u == Approx(0.5));
  CHECK(r.v_u == Approx(h1));
  CHECK(r.l2_B == Approx(std::sqrt(2.0)));
  CHECK(r.v_B == Approx(std::sqrt(2.0) * two_pi));
  CHECK(r.blowup_indicator == Approx(0.04 * h1 * h1));
  CHECK(r.voigt_energy == Approx(0.04 * h1 * h1 + 0.25 + 2.0));
  CHECK(r.energy_residual == 0.0);
  CHECK(r.hs_u.at(0.0) == Approx(r.l2_u));
  CHECK(r.hs_u.at(3.0) == Approx(0.5 * std::pow(two_pi * two_pi * 3, 1.5)));
  CHECK(r.div_max_u < 1e-12);
}

TEST_CASE("diagnostics CSV") {
  DiagRecord<double> r;
  r.t = 0.1;
  r.hs_u = {{2.0, 1.0}, {3.0, 2.0}};
  r.hs_B = {{2.0, 3.0}, {3.0, 4.0}};
  std::ostringstream out;
  write_csv_header(out);
  write_csv_row(out, r);
  CHECK(out.str() ==
        "t,l2_u,v_u,l2_B,v_B,voigt_energy,dissipated,energy_residual,blowup_indicator,"
        "hs_u_2,hs_u_3,hs_B_2,hs_B_3,div_max_u,div_max_B\n"
        "0.10000000000000001,0,0,0,0,0,0,0,0,1,2,3,4,0,0\n");
}

TEST_CASE("energy spectrum of a single mode") {
  SimParams p;
  p.n = 8;
  p.ic.kind = IcKind::single_mode_b;
  p.ic.b_mode = {0, 2, 0};
  p.ic.b_direction = {1, 0, 0};
  p.ic.b_amplitude = 3.0;
  const auto s = initial_state<double>(p);
  const auto e = energy_spectrum(s.b);
  REQUIRE(e.size() == 3);
  CHECK(e[2] == Approx(9.0 / 4));
  CHECK(e[0] == 0.0);
  CHECK(e[1] == 0.0);
}

TEST_CASE("pressure of a Beltrami flow balances its self-advection") {
  auto grid = make_grid(8);
  IcSpec spec;
  spec.kind = IcKind::abc;
  const auto [u, b] = make_ic<double>(spec, grid);
  OperatorContext<double> ctx(grid, 0.0);
  const auto p = recover_pressure(u, b, ctx);
  CHECK(max_abs(gradient(p) + ctx.advect(u, u)) < 1e-12);
  // p = -|u|^2 / 2 up to a constant
  const auto real_u = to_physical(u);
  ScalarRealField<double> half_sq(grid);
  half_sq.values() = -0.5 * real_u.values().rowwise().squaredNorm();
  const auto expected = to_spectral(half_sq, MeanMode::zero);
  CHECK((p.coeffs() - expected.coeffs()).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("recovered pressure makes the momentum forcing solenoidal") {
  auto grid = make_grid(12);
  std::mt19937_64 rng(2);
  const auto u = verify::random_solenoidal_field(grid, rng);
  const auto b = verify::random_solenoidal_field(grid, rng);
  OperatorContext<double> ctx(grid, 0.0);
  const auto p = recover_pressure(u, b);
  const auto forcing = ctx.advect(b, b) - ctx.advect(u, u) - gradient(p);
  CHECK(divergence_max(forcing) < 1e-10 * max_abs(forcing));
  CHECK(verify::relative_difference(forcing, ctx.nonlinear_B(b, b) - ctx.nonlinear_B(u, u)) < 1e-12);
  CHECK(std::abs(p(0, 0)) == 0.0);
}

TEST_CASE("log-log fit") {
  const std::vector<double> x{0.1, 0.05, 0.025, 0.0125};
  std::vector<double> y;
  for (double a : x) y.push_back(3.0 * a * a);
  const auto fit = fit_loglog_slope(x, y);
  CHECK(fit.slope == Approx(2.0).epsilon(1e-12));
  CHECK(std::exp(fit.intercept) == Approx(3.0).epsilon(1e-12));
  CHECK(fit.r2 == Approx(1.0));
  const std::vector<double> flat{2, 2, 2};
  const auto f2 = fit_loglog_slope(std::vector<double>{1, 2, 3}, flat);
  CHECK(f2.slope == Approx(0.0));
  CHECK(f2.r2 == 1.0);
  CHECK_THROWS_AS(fit_loglog_slope(std::vector<double>{1, 2}, std::vector<double>{1, 2}), ValidationError);
  CHECK_THROWS_AS(fit_loglog_slope(std::vector<double>{1, 2, 3}, std::vector<double>{1, 0, 2}),
                  ValidationError);
}

TEST_CASE("exponential rate fit") {
  std::vector<double> t, y;
  for (int i = 0; i <= 10; ++i) {
    t.push_back(0.1 * i);
    y.push_back(2e-12 * std::exp(1.7 * 0.1 * i));
  }
  CHECK(fit_exponential_rate(t, y, y[0]) == Approx(1.7).epsilon(1e-10));
  CHECK(fit_exponential_rate(t, y, 0.0) == 0.0);
}

TEST_CASE("continuous dependence") {
  SimParams p;
  p.n = 16;
  p.alpha = 0.1;
  p.mu = 0.01;
  p.dt = 0.01;
  p.ic.b_amplitude = 0.5;
  auto grid = make_grid(16);
  const auto ic = make_ic<double>(p.ic, grid);

  SUBCASE("identical data stays identical") {
    const auto r = continuous_dependence_check<double>(p, ic, ic, 0.1);
    CHECK(r.t.size() == 11);
    for (double d : r.delta_energy) CHECK(d == 0.0);
    CHECK(r.rate == 0.0);
  }
  SUBCASE("a small perturbation grows at most exponentially") {
    std::mt19937_64 rng(8);
    auto perturbed = ic;
    auto bump = verify::random_solenoidal_field(grid, rng);
    bump *= 1e-6 / l2_norm(bump);
    perturbed.first += bump;
    const auto r = continuous_dependence_check<double>(p, ic, perturbed, 0.2, 2);
    CHECK(r.t.size() == 11);
    CHECK(r.delta_energy.front() == Approx(delta_energy<double>({ic.first, ic.second}, {perturbed.first, perturbed.second}, 0.1)));
    CHECK(std::isfinite(r.rate));
    CHECK(r.envelope_ratio_max >= 1.0);
  }
  SUBCASE("grid mismatch") {
    const auto other = make_ic<double>(p.ic, make_grid(8));
    CHECK_THROWS_AS(continuous_dependence_check<double>(p, ic, other, 0.1), std::invalid_argument);
  }
}
