#pragma once

#include <span>

namespace mhdv {

struct LogLogFit {
  double slope = 0;
  double intercept = 0;
  double r2 = 0;
};

/// Ordinary least squares of log(ys) on log(xs).  Needs at least three
/// points, all strictly positive; r2 is 1 when ys is constant.
LogLogFit fit_loglog_slope(std::span<const double> xs, std::span<const double> ys);

/// Rate c of the exponential y(t) = y(0) exp(c t) fitted by least squares
/// on log(y/y0) through the origin.  Samples with t <= 0 or y <= 0 are
/// ignored; returns 0 when nothing remains.
double fit_exponential_rate(std::span<const double> ts, std::span<const double> ys, double y0);

}  // namespace mhdv
