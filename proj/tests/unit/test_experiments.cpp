#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mhdv/experiments.hpp"

using namespace mhdv;
using doctest::Approx;

namespace {

SimParams small(double t_end = 0.1) {
  SimParams p;
  p.n = 16;
  p.mu = 0.05;
  p.t_end = t_end;
  p.dt = 0.005;
  p.ic.amplitude = 0.5;
  p.ic.b_amplitude = 0.5;
  return p;
}

std::vector<std::vector<double>> power_law(const std::vector<double>& alphas, int samples,
                                           double c, double p) {
  std::vector<std::vector<double>> out;
  for (double a : alphas) out.emplace_back(std::size_t(samples), c * std::pow(a, p));
  return out;
}

const std::vector<double> kAlphas{0.1, 0.05, 0.025, 0.0125};

}  // namespace

TEST_CASE("alpha lists") {
  CHECK_NOTHROW(check_alpha_list(kAlphas, 3));
  CHECK_THROWS_AS(check_alpha_list({0.1, 0.05}, 3), ValidationError);
  CHECK_THROWS_AS(check_alpha_list({0.1, 0.1, 0.05}, 1), ValidationError);
  CHECK_THROWS_AS(check_alpha_list({0.1, 0.05, 0.0}, 1), ValidationError);
  CHECK(format_alpha(0.0125) == "0.0125");
}

TEST_CASE("indicator analysis") {
  const std::vector<double> times{0, 0.5, 1};
  SUBCASE("quadratic scaling vanishes in the limit") {
    const auto r = analyze_indicator(kAlphas, times, power_law(kAlphas, 3, 4.0, 2.0));
    for (double p : r.exponent) CHECK(p == Approx(2.0));
    for (double c : r.prefactor) CHECK(c == Approx(4.0));
    for (double l : r.limit) CHECK(l == 0.0);
    CHECK_FALSE(r.indicates_singularity);
    CHECK(r.min_exponent == Approx(2.0));
    CHECK(r.verdict() == "no indication (heuristic indicator)");
  }
  SUBCASE("a flat indicator is flagged with its limit") {
    const auto r = analyze_indicator(kAlphas, times, power_law(kAlphas, 3, 0.7, 0.1));
    CHECK(r.indicates_singularity);
    CHECK(r.limit[1] == Approx(0.7));
    CHECK(r.verdict().find("possible singularity") != std::string::npos);
  }
  SUBCASE("growth as alpha shrinks extrapolates to infinity") {
    const auto r = analyze_indicator(kAlphas, times, power_law(kAlphas, 3, 1.0, -1.0));
    CHECK(std::isinf(r.limit[0]));
    CHECK(r.indicates_singularity);
  }
  SUBCASE("aborted runs are skipped in the fit") {
    auto ind = power_law(kAlphas, 3, 1.0, 2.0);
    ind[3][2] = std::numeric_limits<double>::quiet_NaN();
    ind[2][2] = std::numeric_limits<double>::quiet_NaN();
    const auto r = analyze_indicator(kAlphas, times, ind);
    CHECK(std::isnan(r.exponent[2]));
    CHECK(r.exponent[1] == Approx(2.0));
  }
}

TEST_CASE("alpha sweep on a coarse grid") {
  const auto r = alpha_sweep<double>(small(), kAlphas);
  CHECK(r.dt == 0.005);
  CHECK(r.times.size() == 21);
  CHECK(r.times.back() == Approx(0.1));
  for (const auto& curve : r.curves) {
    CHECK(curve.front().e_u == 0.0);
    CHECK(curve.front().e_BV_int == 0.0);
  }
  for (std::size_t i = 1; i < kAlphas.size(); ++i) {
    CHECK(r.sup_e_u[i] < r.sup_e_u[i - 1]);
    CHECK(r.sup_e_B[i] < r.sup_e_B[i - 1]);
  }
  REQUIRE(r.slope_e_u);
  CHECK(r.slope_e_u->slope > 0.8);
  const auto ind = r.indicator_matrix();
  CHECK(ind[0][0] == Approx(0.01 * 3 * std::pow(0.5 * std::numbers::pi, 2)));
}

TEST_CASE("zero padding onto a finer grid keeps every coefficient") {
  const auto coarse = initial_state<double>(small());
  const auto fine = detail::prolong(coarse.u, make_grid(32));
  CHECK(l2_norm(fine) == l2_norm(coarse.u));
  CHECK(h1_norm(fine) == Approx(h1_norm(coarse.u)).epsilon(1e-14));
  CHECK(fine(fine.grid().index_of(1, 1, 1), 0) == coarse.u(coarse.u.grid().index_of(1, 1, 1), 0));
}

TEST_CASE("grid refinement cross-check") {
  SweepOptions opt;
  opt.refine_check = true;
  const auto r = alpha_sweep<double>(small(), {0.1, 0.05, 0.025}, opt);
  REQUIRE(r.refinement_gap);
  // discretization error of the reference sits well below the alpha signal
  CHECK(*r.refinement_gap < 0.1 * r.sup_e_u.back());
  CHECK_FALSE(alpha_sweep<double>(small(), {0.1}).refinement_gap);
}

TEST_CASE("sweep preconditions") {
  auto p = small();
  p.mu = 0;
  CHECK_THROWS_AS(alpha_sweep<double>(p, kAlphas), ValidationError);
  CHECK_THROWS_AS(alpha_sweep<double>(small(), {0.05, 0.1}), ValidationError);
}

TEST_CASE("sweep aborts when the reference loses smoothness") {
  auto p = small(1.0);
  // overflows within the first step
  p.ic.amplitude = 1e150;
  p.dt = 0.05;
  try {
    alpha_sweep<double>(p, {0.1});
    FAIL("expected an abort");
  } catch (const BoundViolation&) {
    FAIL("budget check fired before the blow-up");
  } catch (const RuntimeAbort& e) {
    CHECK(std::string(e.what()) == "reference solution lost smoothness before T — shrink T");
  }
}

TEST_CASE("blow-up scan") {
  auto p = small();
  const auto r = blowup_scan<double>(p, {0.1, 0.05, 0.025}, 0.05);
  CHECK(r.times.size() == 11);
  CHECK_FALSE(r.indicates_singularity);
  CHECK(r.min_exponent > 1.7);
  CHECK_FALSE(r.outside_strong_theory);

  p.mu = 0;
  const auto inviscid = blowup_scan<double>(p, {0.1, 0.05, 0.025}, 0.05);
  CHECK(inviscid.outside_strong_theory);
  CHECK(inviscid.verdict().find("outside strong-solution theory") != std::string::npos);
  CHECK_THROWS_AS(blowup_scan<double>(p, {0.1, 0.05}, 0.05), ValidationError);
}
