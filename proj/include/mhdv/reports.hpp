#pragma once

#include "mhdv/experiments.hpp"

#include <filesystem>
#include <ostream>

namespace mhdv {

/// sweep directory: alpha_<a>.csv per alpha, report.csv and summary.txt.
void write_sweep(const SweepReport& report, const std::filesystem::path& dir);
void print_sweep_summary(const SweepReport& report, std::ostream& out);

/// blow-up directory: indicator.csv, report.csv and summary.txt.
void write_blowup(const BlowupScanReport& report, const std::filesystem::path& dir);
void print_blowup_summary(const BlowupScanReport& report, std::ostream& out);

/// "k,E_u,E_B" rows.
void write_spectrum_csv(const SimState<double>& state, std::ostream& out);

std::string format_double(double v);

}  // namespace mhdv
