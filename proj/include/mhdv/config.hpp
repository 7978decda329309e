#pragma once

#include "mhdv/state.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mhdv {

/// Everything a CLI run needs: simulation parameters plus output control.
///
/// Text form is one `key = value` per line with `#` comments.  Required
/// keys: n, alpha, mu, t_end, ic.  Defaults: nu = 0, dt = auto,
/// cfl_safety = 0.5, dt_max = 0.05, dt_min = 1e-10, diag_interval = 1,
/// snapshots and checkpoints off, hs_monitor_set = 0,1,2,3,
/// dealias = two_thirds (the only accepted value).
struct RunConfig {
  SimParams params;
  std::string output_dir = "out";
  std::string tag = "run";
  long diag_interval = 1;
  std::optional<long> snapshot_interval;
  std::optional<long> checkpoint_interval;
  std::vector<double> hs_monitor_set{0, 1, 2, 3};
};

/// Strict parse: unknown, duplicate, malformed or out-of-range entries are
/// rejected with the line number; missing required keys are named.
RunConfig parse_config(std::string_view text);

RunConfig load_config(const std::filesystem::path& path);

/// Apply one `key=value` override (same validation as a config line).
void apply_override(RunConfig& config, std::string_view assignment);

/// Canonical text form: every key, fixed order, doubles with 17 digits.
std::string dump_config(const RunConfig& config);

}  // namespace mhdv
