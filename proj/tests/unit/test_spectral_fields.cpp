#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mhdv/spectral_fields.hpp"
#include "mhdv/operators.hpp"
#include "mhdv/verify.hpp"


#include <numbers>

using namespace mhdv;
using doctest::Approx;

namespace {

constexpr double two_pi = 2 * std::numbers::pi;

double max_abs(const SpectralField<double>& f) { return f.coeffs().cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("lattice indexing") {
  WavenumberGrid<double> grid(12);
  CHECK(grid.cutoff() == 3);
  for (Index idx = 0; idx < grid.size(); ++idx) {
    const auto k = grid.wavevector(idx);
    REQUIRE(grid.index_of(k) == idx);
    if (!grid.is_nyquist(idx)) CHECK(grid.wavevector(grid.mirror(idx)) == Eigen::Vector3i(-k));
  }
  CHECK(grid.dealias_mask().count() == 7 * 7 * 7);
  CHECK(grid.kappa_sq()[grid.index_of(1, 2, -2)] == Approx(two_pi * two_pi * 9));
  CHECK(grid.inv_kappa_sq()[0] == 0.0);
  CHECK_THROWS_AS(WavenumberGrid<double>(7), std::invalid_argument);
  CHECK_THROWS_AS(WavenumberGrid<double>(6), std::invalid_argument);
}

TEST_CASE("transform round trip and Parseval") {
  auto grid = make_grid(16);
  std::mt19937_64 rng(1);
  const auto f = verify::random_solenoidal_field(grid, rng);
  const auto real = to_physical(f);
  const auto back = to_spectral(real);
  CHECK(max_abs(back - f) < 1e-14 * max_abs(f));
  const double mean_sq = real.values().squaredNorm() / double(grid->size());
  CHECK(mean_sq == Approx(inner(f, f)).epsilon(1e-13));
}

TEST_CASE("a single cosine mode synthesizes the sampled cosine") {
  auto grid = make_grid(8);
  SpectralField<double> f(grid);
  const Eigen::Vector3i k(1, -2, 0);
  f(grid->index_of(k), 2) = 0.5;
  f(grid->mirror(grid->index_of(k)), 2) = 0.5;
  const auto real = to_physical(f);
  double worst = 0;
  for (Index i = 0; i < grid->size(); ++i) {
    const auto x = real.point(i);
    const double expected = std::cos(two_pi * (k.cast<double>().dot(x)));
    worst = std::max(worst, std::abs(real.values()(i, 2) - expected));
  }
  CHECK(worst < 1e-14);
  CHECK(real.values().col(0).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("zero mean mode on the forward transform") {
  auto grid = make_grid(8);
  RealField<double> real(grid);
  real.values().setConstant(3.0);
  CHECK(std::abs(to_spectral(real)(0, 1) - 3.0) < 1e-15);
  CHECK(std::abs(to_spectral(real, MeanMode::zero)(0, 1)) == 0.0);
}

TEST_CASE("Leray projection") {
  auto grid = make_grid(8);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  SpectralField<double> f(grid);
  for (Index i = 0; i < grid->size(); ++i) {
    for (int d = 0; d < 3; ++d) f(i, d) = {g(rng), g(rng)};
  }
  const auto p = leray_project(f);
  CHECK(p.divfree());
  CHECK(divergence_max(p) < 1e-12);
  CHECK(max_abs(leray_project(p) - p) < 1e-14);
  CHECK(max_abs(p - verify::dense_project(f)) < 1e-14);
  // orthogonal complement: f - Pf is a gradient, orthogonal to every solenoidal field
  const auto q = verify::random_solenoidal_field(grid, rng);
  CHECK(std::abs(inner(f - p, q)) < 1e-12 * l2_norm(f) * l2_norm(q));
  CHECK(std::abs(p(0, 0)) == 0.0);
}

TEST_CASE("Taylor-Green initial data") {
  auto grid = make_grid(16);
  IcSpec spec;
  spec.amplitude = 2.0;
  const auto [u, b] = make_ic<double>(spec, grid);
  // |u|^2 = A^2 (1/8 + 1/8)
  CHECK(l2_norm(u) == Approx(1.0).epsilon(1e-14));
  CHECK(h1_norm(u) == Approx(two_pi * std::sqrt(3.0)).epsilon(1e-13));
  CHECK(l2_norm(b) == 0.0);
  CHECK(divergence_max(u) < 1e-12);
  CHECK(hermitian_defect(u) < 1e-15);
  CHECK(std::abs(u(grid->index_of(1, 1, 1), 0) - std::complex<double>(0, -0.25)) < 1e-14);
}

TEST_CASE("ABC flow is a Beltrami field") {
  auto grid = make_grid(8);
  IcSpec spec;
  spec.kind = IcKind::abc;
  const auto [u, b] = make_ic<double>(spec, grid);
  CHECK(l2_norm(u) == Approx(std::sqrt(3.0)).epsilon(1e-14));
  // curl u = 2 pi u
  const std::complex<double> I(0, 1);
  const auto& kap = grid->kappa();
  double worst = 0;
  for (Index i = 0; i < grid->size(); ++i) {
    const Eigen::Vector3cd c(u(i, 0), u(i, 1), u(i, 2));
    const Eigen::Vector3cd k = kap.row(i).transpose().cast<std::complex<double>>();
    // Eigen's cross conjugates complex operands, so spell it out
    const Eigen::Vector3cd curl = I * Eigen::Vector3cd(k[1] * c[2] - k[2] * c[1], k[2] * c[0] - k[0] * c[2],
                                                       k[0] * c[1] - k[1] * c[0]);
    worst = std::max(worst, (curl - two_pi * c).cwiseAbs().maxCoeff());
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("single magnetic mode") {
  auto grid = make_grid(8);
  IcSpec spec;
  spec.kind = IcKind::single_mode_b;
  const auto [u, b] = make_ic<double>(spec, grid);
  CHECK(l2_norm(u) == 0.0);
  CHECK(l2_norm(b) == Approx(std::sqrt(0.5)));
  CHECK(b(grid->index_of(1, 0, 0), 1) == std::complex<double>(0.5, 0));
  CHECK(b(grid->index_of(-1, 0, 0), 1) == std::complex<double>(0.5, 0));

  spec.b_direction = {1, 0, 0};
  CHECK_THROWS_AS(make_ic<double>(spec, grid), std::invalid_argument);
  spec.b_direction = {0, 0, 1};
  spec.b_mode = {3, 0, 0};
  CHECK_THROWS_AS(make_ic<double>(spec, grid), std::invalid_argument);
}

TEST_CASE("Elsasser initial data has u = B") {
  auto grid = make_grid(8);
  IcSpec spec;
  spec.kind = IcKind::elsasser;
  const auto [u, b] = make_ic<double>(spec, grid);
  CHECK(u.coeffs() == b.coeffs());
  CHECK(l2_norm(u) == Approx(0.5));
}

TEST_CASE("random solenoidal initial data") {
  auto grid = make_grid(16);
  IcSpec spec;
  spec.kind = IcKind::random_divfree;
  spec.seed = 42;
  spec.amplitude = 0.7;
  const auto [u, b] = make_ic<double>(spec, grid);
  CHECK(l2_norm(u) == Approx(0.7).epsilon(1e-14));
  CHECK(l2_norm(b) == Approx(0.7).epsilon(1e-14));
  CHECK(divergence_max(u) < 1e-12);
  CHECK(hermitian_defect(b) < 1e-15);
  CHECK(max_abs(u - b) > 0.0);
  const auto again = make_ic<double>(spec, grid);
  CHECK(again.first.coeffs() == u.coeffs());
  spec.seed = 43;
  CHECK(make_ic<double>(spec, grid).first.coeffs() != u.coeffs());
  // nothing outside the dealiased set
  for (Index i = 0; i < grid->size(); ++i) {
    if (!grid->dealias_mask()[i]) REQUIRE(u.coeffs().row(i).squaredNorm() == 0.0);
  }
}

TEST_CASE("initial condition names") {
  CHECK(parse_ic_kind("taylor_green") == IcKind::taylor_green);
  CHECK(to_string(IcKind::random_divfree) == "random_divfree");
  CHECK_THROWS_AS(parse_ic_kind("orszag_tang"), std::invalid_argument);
}

TEST_CASE("grid mismatch is rejected") {
  SpectralField<double> a(make_grid(8)), b(make_grid(10));
  CHECK_THROWS_WITH(inner(a, b), "grid mismatch: n=8 vs n=10");
}
