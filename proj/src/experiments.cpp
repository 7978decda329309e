#include "mhdv/experiments.hpp"

#include <cstdio>

namespace mhdv {

std::vector<std::vector<double>> SweepReport::indicator_matrix() const {
  std::vector<std::vector<double>> out(curves.size());
  for (std::size_t i = 0; i < curves.size(); ++i) {
    for (const auto& e : curves[i]) out[i].push_back(e.indicator);
  }
  return out;
}

std::string BlowupScanReport::verdict() const {
  std::string text = indicates_singularity
                         ? "criterion indicates possible singularity (heuristic indicator)"
                         : "no indication (heuristic indicator)";
  if (outside_strong_theory) text += "; mu = 0: outside strong-solution theory";
  return text;
}

std::string format_alpha(double alpha) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", alpha);
  return buf;
}

void check_alpha_list(const std::vector<double>& alphas, std::size_t minimum) {
  if (alphas.size() < minimum) {
    throw ValidationError("at least " + std::to_string(minimum) +
                          " alpha values are required (got " + std::to_string(alphas.size()) + ")");
  }
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (!(alphas[i] > 0) || !std::isfinite(alphas[i])) {
      throw ValidationError("alpha values must be finite and > 0");
    }
    if (i > 0 && !(alphas[i] < alphas[i - 1])) {
      throw ValidationError("alpha values must be strictly decreasing");
    }
  }
}

BlowupScanReport analyze_indicator(std::vector<double> alphas, std::vector<double> times,
                                   std::vector<std::vector<double>> indicator,
                                   const BlowupOptions& options) {
  BlowupScanReport report;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double inf = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < times.size(); ++k) {
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < alphas.size(); ++i) {
      const double v = indicator[i][k];
      if (v > 0 && std::isfinite(v)) {
        xs.push_back(alphas[i]);
        ys.push_back(v);
      }
    }
    if (xs.size() < 3) {
      report.exponent.push_back(nan);
      report.prefactor.push_back(nan);
      report.r2.push_back(nan);
      report.limit.push_back(0.0);
      continue;
    }
    const auto fit = fit_loglog_slope(xs, ys);
    const double c = std::exp(fit.intercept);
    report.exponent.push_back(fit.slope);
    report.prefactor.push_back(c);
    report.r2.push_back(fit.r2);
    double limit = 0.0;
    if (fit.slope < -options.flat_exponent) {
      limit = inf;
    } else if (fit.slope <= options.flat_exponent) {
      limit = c;
    }
    report.limit.push_back(limit);
    if (std::isnan(report.min_exponent) || fit.slope < report.min_exponent) {
      report.min_exponent = fit.slope;
    }
    if (limit > 0) report.indicates_singularity = true;
  }
  report.alphas = std::move(alphas);
  report.times = std::move(times);
  report.indicator = std::move(indicator);
  return report;
}

}  // namespace mhdv
