#include "mhdv/diagnostics.hpp"

#include <cstdio>

namespace mhdv {
namespace {

void put(std::ostream& out, double value, bool last = false) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  out << buf << (last ? '\n' : ',');
}

}  // namespace

void write_csv_header(std::ostream& out) {
  out << "t,l2_u,v_u,l2_B,v_B,voigt_energy,dissipated,energy_residual,blowup_indicator,"
         "hs_u_2,hs_u_3,hs_B_2,hs_B_3,div_max_u,div_max_B\n";
}

void write_csv_row(std::ostream& out, const DiagRecord<double>& r) {
  put(out, r.t);
  put(out, r.l2_u);
  put(out, r.v_u);
  put(out, r.l2_B);
  put(out, r.v_B);
  put(out, r.voigt_energy);
  put(out, r.dissipated);
  put(out, r.energy_residual);
  put(out, r.blowup_indicator);
  put(out, r.hs_u.at(2.0));
  put(out, r.hs_u.at(3.0));
  put(out, r.hs_B.at(2.0));
  put(out, r.hs_B.at(3.0));
  put(out, r.div_max_u);
  put(out, r.div_max_B, true);
}

}  // namespace mhdv
