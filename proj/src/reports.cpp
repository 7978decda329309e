#include "mhdv/reports.hpp"

#include "mhdv/snapshot.hpp"

#include <cstdio>
#include <sstream>

namespace mhdv {
namespace {

void fit_line(std::ostream& out, const char* name, const std::optional<LogLogFit>& fit) {
  out << name << ": ";
  if (fit) {
    out << "slope " << format_double(fit->slope) << ", r2 " << format_double(fit->r2) << "\n";
  } else {
    out << "no fit\n";
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void print_sweep_summary(const SweepReport& report, std::ostream& out) {
  out << "alpha sweep: " << report.alphas.size() << " alphas, reference alpha "
      << format_double(report.reference_alpha) << ", dt " << format_double(report.dt) << ", "
      << report.times.size() << " samples\n";
  fit_line(out, "sup |u^a - u|", report.slope_e_u);
  fit_line(out, "sup ||u^a - u||", report.slope_e_uV);
  fit_line(out, "sup |B^a - B|", report.slope_e_B);
  fit_line(out, "L2(V) |B^a - B|", report.slope_e_BV_int);
  if (report.refinement_gap) {
    out << "reference refinement gap (n vs 2n, L2 at T): " << format_double(*report.refinement_gap) << "\n";
  }
}

void write_sweep(const SweepReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (std::size_t i = 0; i < report.alphas.size(); ++i) {
    std::ostringstream csv;
    csv << "t,e_u,e_uV,e_B,e_BV_int,indicator\n";
    for (const auto& e : report.curves[i]) {
      csv << format_double(e.t) << ',' << format_double(e.e_u) << ',' << format_double(e.e_uV) << ','
          << format_double(e.e_B) << ',' << format_double(e.e_BV_int) << ','
          << format_double(e.indicator) << '\n';
    }
    write_file_atomic(dir / ("alpha_" + format_alpha(report.alphas[i]) + ".csv"), csv.str());
  }
  std::ostringstream csv;
  csv << "alpha,sup_e_u,sup_e_uV,sup_e_B,e_BV_int\n";
  for (std::size_t i = 0; i < report.alphas.size(); ++i) {
    csv << format_double(report.alphas[i]) << ',' << format_double(report.sup_e_u[i]) << ','
        << format_double(report.sup_e_uV[i]) << ',' << format_double(report.sup_e_B[i]) << ','
        << format_double(report.e_BV_int[i]) << '\n';
  }
  write_file_atomic(dir / "report.csv", csv.str());
  std::ostringstream summary;
  print_sweep_summary(report, summary);
  write_file_atomic(dir / "summary.txt", summary.str());
}

void print_blowup_summary(const BlowupScanReport& report, std::ostream& out) {
  out << "blow-up scan: " << report.alphas.size() << " alphas, " << report.times.size()
      << " samples\n";
  out << "min fitted exponent: " << format_double(report.min_exponent) << "\n";
  for (const auto& [alpha, why] : report.failures) {
    out << "alpha " << format_alpha(alpha) << " aborted: " << why << "\n";
  }
  out << report.verdict() << "\n";
}

void write_blowup(const BlowupScanReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::ostringstream ind;
  ind << "t";
  for (double a : report.alphas) ind << ",I_" << format_alpha(a);
  ind << '\n';
  for (std::size_t k = 0; k < report.times.size(); ++k) {
    ind << format_double(report.times[k]);
    for (const auto& row : report.indicator) ind << ',' << format_double(row[k]);
    ind << '\n';
  }
  write_file_atomic(dir / "indicator.csv", ind.str());
  std::ostringstream csv;
  csv << "t,exponent,prefactor,r2,limit\n";
  for (std::size_t k = 0; k < report.times.size(); ++k) {
    csv << format_double(report.times[k]) << ',' << format_double(report.exponent[k]) << ','
        << format_double(report.prefactor[k]) << ',' << format_double(report.r2[k]) << ','
        << format_double(report.limit[k]) << '\n';
  }
  write_file_atomic(dir / "report.csv", csv.str());
  std::ostringstream summary;
  print_blowup_summary(report, summary);
  write_file_atomic(dir / "summary.txt", summary.str());
}

void write_spectrum_csv(const SimState<double>& state, std::ostream& out) {
  auto eu = energy_spectrum(state.u);
  auto eb = energy_spectrum(state.b);
  const std::size_t shells = std::max(eu.size(), eb.size());
  eu.resize(shells, 0.0);
  eb.resize(shells, 0.0);
  out << "k,E_u,E_B\n";
  for (std::size_t k = 0; k < shells; ++k) {
    out << k << ',' << format_double(eu[k]) << ',' << format_double(eb[k]) << '\n';
  }
}

}  // namespace mhdv
