#include "mhdv/errors.hpp"
#include "mhdv/state.hpp"

#include <cmath>
#include <string>

namespace mhdv {
namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw ValidationError(message);
}

}  // namespace

void SimParams::validate() const {
  require(std::isfinite(alpha) && alpha >= 0, "alpha must be >= 0");
  require(std::isfinite(mu) && mu >= 0, "mu must be >= 0");
  require(std::isfinite(nu) && nu >= 0, "nu must be >= 0");
  require(n >= 8 && n % 2 == 0, "n must be even and >= 8");
  require(!dt || (std::isfinite(*dt) && *dt > 0), "dt must be > 0");
  require(std::isfinite(dt_max) && dt_max > 0, "dt_max must be > 0");
  require(std::isfinite(dt_min) && dt_min >= 0, "dt_min must be >= 0");
  require(std::isfinite(t_end) && t_end >= 0, "t_end must be >= 0");
  require(cfl_safety > 0 && cfl_safety <= 1, "cfl_safety must lie in (0, 1]");
  require(ic.k0 > 0, "k0 must be > 0");
  require(std::isfinite(bound_tolerance) && bound_tolerance >= 0, "bound_tolerance must be >= 0");
  if (reference_mhd() && !(mu > 0)) {
    require(smoothness_horizon.has_value(),
            "alpha = 0 (reference MHD) requires mu > 0 or a smoothness_horizon");
    require(t_end <= *smoothness_horizon,
            "alpha = 0 (reference MHD) with mu = 0 requires t_end <= smoothness_horizon");
  }
}

}  // namespace mhdv
