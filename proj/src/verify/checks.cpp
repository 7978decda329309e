#include "mhdv/operators.hpp"
#include "mhdv/timestepper.hpp"
#include "mhdv/verify.hpp"

#include <Eigen/Dense>

#include <cstdio>

namespace mhdv::verify {
namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

Check make(std::string name, double value, double limit) {
  return {std::move(name), value <= limit, sci(value) + " (limit " + sci(limit) + ")"};
}

Check trilinear(int n, int triples) {
  auto grid = make_grid<double>(n);
  OperatorContext<double> ctx(grid, 0.0);
  std::mt19937_64 rng(20240601);
  double worst = 0;
  for (int i = 0; i < triples; ++i) {
    const auto u = random_solenoidal_field(grid, rng);
    const auto v = random_solenoidal_field(grid, rng);
    const auto w = random_solenoidal_field(grid, rng);
    const double nu = h1_norm(u), nv = h1_norm(v), nw = h1_norm(w);
    worst = std::max(worst, std::abs(ctx.trilinear_b(u, v, v)) / (nu * nv * nv));
    worst = std::max(worst,
                     std::abs(ctx.trilinear_b(u, v, w) + ctx.trilinear_b(u, w, v)) / (nu * nv * nw));
  }
  return make("trilinear antisymmetry N=" + std::to_string(n), worst, 1e-12);
}

Check oracle(int inputs) {
  auto grid = make_grid<double>(8);
  OperatorContext<double> ctx(grid, 0.0);
  std::mt19937_64 rng(7);
  double worst = 0;
  for (int i = 0; i < inputs; ++i) {
    const auto u = random_solenoidal_field(grid, rng);
    const auto v = random_solenoidal_field(grid, rng);
    worst = std::max(worst, relative_difference(ctx.nonlinear_B(u, v), convolution_nonlinear_B(u, v)));
  }
  return make("nonlinear term vs convolution N=8", worst, 1e-12);
}

Check leray() {
  auto grid = make_grid<double>(8);
  const auto P = leray_matrix(*grid);
  double worst = (P * P - P).cwiseAbs().maxCoeff();
  worst = std::max(worst, (P - P.adjoint()).cwiseAbs().maxCoeff());
  // compare with the library projection on a random unprojected field
  std::mt19937_64 rng(11);
  std::normal_distribution<double> gauss;
  const int c = grid->cutoff();
  Eigen::VectorXcd x(P.rows());
  SpectralField<double> f(grid);
  Index row = 0;
  for (int a = -c; a <= c; ++a) {
    for (int b = -c; b <= c; ++b) {
      for (int d = -c; d <= c; ++d) {
        for (int comp = 0; comp < 3; ++comp) {
          x[row] = {gauss(rng), gauss(rng)};
          f(grid->index_of(a, b, d), comp) = x[row];
          ++row;
        }
      }
    }
  }
  const Eigen::VectorXcd px = P * x;
  const auto g = leray_project(f);
  row = 0;
  for (int a = -c; a <= c; ++a) {
    for (int b = -c; b <= c; ++b) {
      for (int d = -c; d <= c; ++d) {
        for (int comp = 0; comp < 3; ++comp, ++row) {
          worst = std::max(worst, std::abs(g(grid->index_of(a, b, d), comp) - px[row]));
        }
      }
    }
  }
  // gradients are annihilated
  ScalarSpectralField<double> phi(grid);
  for (Index i = 0; i < grid->size(); ++i) {
    if (grid->dealias_mask()[i]) phi(i, 0) = {gauss(rng), gauss(rng)};
  }
  SpectralField<double> grad(grid);
  for (int d = 0; d < 3; ++d) {
    grad.coeffs().col(d).array() = std::complex<double>(0, 1) * phi.coeffs().col(0).array() *
                                   grid->kappa().col(d);
  }
  const double scale = grad.coeffs().cwiseAbs().maxCoeff();
  worst = std::max(worst, leray_project(grad).coeffs().cwiseAbs().maxCoeff() / scale);
  return make("Leray projector: idempotent, self-adjoint, kills gradients", worst, 1e-12);
}

Check elsasser() {
  auto grid = make_grid<double>(16);
  OperatorContext<double> ctx(grid, 0.1);
  std::mt19937_64 rng(3);
  const auto u = random_solenoidal_field(grid, rng);
  auto [du, db] = ctx.nonlinear_rhs(u, u);
  const double worst = std::max(du.coeffs().cwiseAbs().maxCoeff(), db.coeffs().cwiseAbs().maxCoeff());
  return make("u = B nonlinear cancellation", worst, 1e-13);
}

Check energy(int n, int steps) {
  SimParams p;
  p.n = n;
  p.alpha = 0.1;
  p.mu = 0.02;
  p.dt = 1e-3;
  p.t_end = steps * 1e-3;
  p.ic.kind = IcKind::taylor_green;
  p.ic.b_amplitude = 0.5;
  Simulation<double> sim(p, initial_state<double>(p));
  while (!sim.finished()) sim.advance(sim.next_dt());
  const auto r = sim.record();
  return make("energy budget residual, " + std::to_string(steps) + " steps at N=" + std::to_string(n),
              std::abs(r.energy_residual) / sim.initial_energy(), 1e-10);
}

}  // namespace

std::vector<Check> run_checks(Level level) {
  std::vector<Check> checks;
  const bool full = level == Level::full;
  checks.push_back(oracle(full ? 20 : 4));
  checks.push_back(leray());
  checks.push_back(trilinear(full ? 16 : 8, full ? 100 : 10));
  checks.push_back(elsasser());
  checks.push_back(energy(full ? 32 : 16, full ? 100 : 20));
  return checks;
}

}  // namespace mhdv::verify
