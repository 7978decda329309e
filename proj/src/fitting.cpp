#include "mhdv/fitting.hpp"

#include "mhdv/errors.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace mhdv {

LogLogFit fit_loglog_slope(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw ValidationError("fit: xs and ys differ in length");
  if (xs.size() < 3) throw ValidationError("fit: at least three points are required");
  const Eigen::Index m = Eigen::Index(xs.size());
  Eigen::MatrixXd design(m, 2);
  Eigen::VectorXd rhs(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    if (!(xs[i] > 0) || !(ys[i] > 0) || !std::isfinite(xs[i]) || !std::isfinite(ys[i])) {
      throw ValidationError("fit: inputs must be finite and strictly positive");
    }
    design(i, 0) = std::log(xs[i]);
    design(i, 1) = 1.0;
    rhs[i] = std::log(ys[i]);
  }
  const Eigen::Vector2d coef = design.colPivHouseholderQr().solve(rhs);
  const Eigen::VectorXd residual = rhs - design * coef;
  const double ss_res = residual.squaredNorm();
  const double ss_tot = (rhs.array() - rhs.mean()).matrix().squaredNorm();
  LogLogFit fit;
  fit.slope = coef[0];
  fit.intercept = coef[1];
  fit.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

double fit_exponential_rate(std::span<const double> ts, std::span<const double> ys, double y0) {
  if (ts.size() != ys.size()) throw ValidationError("fit: ts and ys differ in length");
  if (!(y0 > 0)) return 0.0;
  double num = 0, den = 0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (!(ts[i] > 0) || !(ys[i] > 0)) continue;
    const double y = std::log(ys[i] / y0);
    num += ts[i] * y;
    den += ts[i] * ts[i];
  }
  return den > 0 ? num / den : 0.0;
}

}  // namespace mhdv
