#include "mhdv/config.hpp"

#include "mhdv/errors.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace mhdv {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_double(std::string_view key, std::string_view v) {
  double out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out)) {
    throw ValidationError(std::string(key) + ": '" + std::string(v) + "' is not a finite number");
  }
  return out;
}

long to_long(std::string_view key, std::string_view v) {
  long out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ValidationError(std::string(key) + ": '" + std::string(v) + "' is not an integer");
  }
  return out;
}

std::uint64_t to_u64(std::string_view key, std::string_view v) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ValidationError(std::string(key) + ": '" + std::string(v) + "' is not an unsigned integer");
  }
  return out;
}

bool to_bool(std::string_view key, std::string_view v) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw ValidationError(std::string(key) + ": expected true or false, got '" + std::string(v) + "'");
}

std::vector<std::string_view> split_list(std::string_view v) {
  std::vector<std::string_view> parts;
  while (true) {
    const auto comma = v.find(',');
    parts.push_back(trim(v.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    v.remove_prefix(comma + 1);
  }
  return parts;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ValidationError(message);
}

struct Key {
  bool required;
  std::function<void(RunConfig&, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

double nonneg(std::string_view key, std::string_view v) {
  const double x = to_double(key, v);
  require(x >= 0, std::string(key) + " must be >= 0");
  return x;
}

double positive(std::string_view key, std::string_view v) {
  const double x = to_double(key, v);
  require(x > 0, std::string(key) + " must be > 0");
  return x;
}

long interval(std::string_view key, std::string_view v) {
  const long x = to_long(key, v);
  require(x >= 1, std::string(key) + " must be >= 1");
  return x;
}

const std::vector<std::pair<std::string, Key>>& keys() {
  static const std::vector<std::pair<std::string, Key>> table = [] {
    std::vector<std::pair<std::string, Key>> t;
    auto add = [&](std::string name, bool required, auto set, auto get) {
      t.emplace_back(std::move(name), Key{required, set, get});
    };
    add("n", true,
        [](RunConfig& c, std::string_view v) {
          const long n = to_long("n", v);
          require(n >= 8 && n % 2 == 0 && n <= 4096, "n must be even and in [8, 4096]");
          c.params.n = int(n);
        },
        [](const RunConfig& c) { return std::to_string(c.params.n); });
    add("alpha", true, [](RunConfig& c, std::string_view v) { c.params.alpha = nonneg("alpha", v); },
        [](const RunConfig& c) { return fmt(c.params.alpha); });
    add("mu", true, [](RunConfig& c, std::string_view v) { c.params.mu = nonneg("mu", v); },
        [](const RunConfig& c) { return fmt(c.params.mu); });
    add("nu", false, [](RunConfig& c, std::string_view v) { c.params.nu = nonneg("nu", v); },
        [](const RunConfig& c) { return fmt(c.params.nu); });
    add("t_end", true, [](RunConfig& c, std::string_view v) { c.params.t_end = nonneg("t_end", v); },
        [](const RunConfig& c) { return fmt(c.params.t_end); });
    add("dt", false,
        [](RunConfig& c, std::string_view v) {
          if (v == "auto") {
            c.params.dt.reset();
          } else {
            c.params.dt = positive("dt", v);
          }
        },
        [](const RunConfig& c) { return c.params.dt ? fmt(*c.params.dt) : std::string("auto"); });
    add("dt_max", false, [](RunConfig& c, std::string_view v) { c.params.dt_max = positive("dt_max", v); },
        [](const RunConfig& c) { return fmt(c.params.dt_max); });
    add("dt_min", false, [](RunConfig& c, std::string_view v) { c.params.dt_min = nonneg("dt_min", v); },
        [](const RunConfig& c) { return fmt(c.params.dt_min); });
    add("cfl_safety", false,
        [](RunConfig& c, std::string_view v) {
          const double x = to_double("cfl_safety", v);
          require(x > 0 && x <= 1, "cfl_safety must lie in (0, 1]");
          c.params.cfl_safety = x;
        },
        [](const RunConfig& c) { return fmt(c.params.cfl_safety); });
    add("integrating_factor", false,
        [](RunConfig& c, std::string_view v) {
          c.params.integrating_factor = to_bool("integrating_factor", v);
        },
        [](const RunConfig& c) { return std::string(c.params.integrating_factor ? "true" : "false"); });
    add("bound_tolerance", false,
        [](RunConfig& c, std::string_view v) { c.params.bound_tolerance = nonneg("bound_tolerance", v); },
        [](const RunConfig& c) { return fmt(c.params.bound_tolerance); });
    add("smoothness_horizon", false,
        [](RunConfig& c, std::string_view v) {
          if (v == "none") {
            c.params.smoothness_horizon.reset();
          } else {
            c.params.smoothness_horizon = positive("smoothness_horizon", v);
          }
        },
        [](const RunConfig& c) {
          return c.params.smoothness_horizon ? fmt(*c.params.smoothness_horizon) : std::string("none");
        });
    add("dealias", false,
        [](RunConfig&, std::string_view v) {
          require(v == "two_thirds", "dealias: only two_thirds is supported");
        },
        [](const RunConfig&) { return std::string("two_thirds"); });
    add("ic", true, [](RunConfig& c, std::string_view v) { c.params.ic.kind = parse_ic_kind(v); },
        [](const RunConfig& c) { return std::string(to_string(c.params.ic.kind)); });
    add("amplitude", false,
        [](RunConfig& c, std::string_view v) { c.params.ic.amplitude = to_double("amplitude", v); },
        [](const RunConfig& c) { return fmt(c.params.ic.amplitude); });
    add("b_amplitude", false,
        [](RunConfig& c, std::string_view v) {
          if (v == "default") {
            c.params.ic.b_amplitude.reset();
          } else {
            c.params.ic.b_amplitude = to_double("b_amplitude", v);
          }
        },
        [](const RunConfig& c) {
          return c.params.ic.b_amplitude ? fmt(*c.params.ic.b_amplitude) : std::string("default");
        });
    add("b_mode", false,
        [](RunConfig& c, std::string_view v) {
          const auto parts = split_list(v);
          require(parts.size() == 3, "b_mode: expected three integers");
          for (int d = 0; d < 3; ++d) c.params.ic.b_mode[d] = int(to_long("b_mode", parts[d]));
        },
        [](const RunConfig& c) {
          const auto& k = c.params.ic.b_mode;
          return std::to_string(k[0]) + "," + std::to_string(k[1]) + "," + std::to_string(k[2]);
        });
    add("b_direction", false,
        [](RunConfig& c, std::string_view v) {
          const auto parts = split_list(v);
          require(parts.size() == 3, "b_direction: expected three numbers");
          for (int d = 0; d < 3; ++d) c.params.ic.b_direction[d] = to_double("b_direction", parts[d]);
        },
        [](const RunConfig& c) {
          const auto& a = c.params.ic.b_direction;
          return fmt(a[0]) + "," + fmt(a[1]) + "," + fmt(a[2]);
        });
    add("k0", false, [](RunConfig& c, std::string_view v) { c.params.ic.k0 = positive("k0", v); },
        [](const RunConfig& c) { return fmt(c.params.ic.k0); });
    add("seed", false, [](RunConfig& c, std::string_view v) { c.params.ic.seed = to_u64("seed", v); },
        [](const RunConfig& c) { return std::to_string(c.params.ic.seed); });
    add("output_dir", false,
        [](RunConfig& c, std::string_view v) {
          require(!v.empty(), "output_dir must not be empty");
          c.output_dir = std::string(v);
        },
        [](const RunConfig& c) { return c.output_dir; });
    add("tag", false,
        [](RunConfig& c, std::string_view v) {
          require(!v.empty() && v.find('/') == std::string_view::npos,
                  "tag must be non-empty and contain no '/'");
          c.tag = std::string(v);
        },
        [](const RunConfig& c) { return c.tag; });
    add("diag_interval", false,
        [](RunConfig& c, std::string_view v) { c.diag_interval = interval("diag_interval", v); },
        [](const RunConfig& c) { return std::to_string(c.diag_interval); });
    add("snapshot_interval", false,
        [](RunConfig& c, std::string_view v) {
          if (v == "none") {
            c.snapshot_interval.reset();
          } else {
            c.snapshot_interval = interval("snapshot_interval", v);
          }
        },
        [](const RunConfig& c) {
          return c.snapshot_interval ? std::to_string(*c.snapshot_interval) : std::string("none");
        });
    add("checkpoint_interval", false,
        [](RunConfig& c, std::string_view v) {
          if (v == "none") {
            c.checkpoint_interval.reset();
          } else {
            c.checkpoint_interval = interval("checkpoint_interval", v);
          }
        },
        [](const RunConfig& c) {
          return c.checkpoint_interval ? std::to_string(*c.checkpoint_interval) : std::string("none");
        });
    add("hs_monitor_set", false,
        [](RunConfig& c, std::string_view v) {
          std::vector<double> set;
          for (auto part : split_list(v)) set.push_back(nonneg("hs_monitor_set", part));
          c.hs_monitor_set = std::move(set);
        },
        [](const RunConfig& c) {
          std::string out;
          for (std::size_t i = 0; i < c.hs_monitor_set.size(); ++i) {
            out += (i ? "," : "") + fmt(c.hs_monitor_set[i]);
          }
          return out;
        });
    return t;
  }();
  return table;
}

const Key* find_key(std::string_view name) {
  for (const auto& [k, key] : keys()) {
    if (k == name) return &key;
  }
  return nullptr;
}

std::pair<std::string_view, std::string_view> split_assignment(std::string_view line) {
  const auto eq = line.find('=');
  if (eq == std::string_view::npos) throw ValidationError("expected key = value");
  const auto key = trim(line.substr(0, eq));
  const auto value = trim(line.substr(eq + 1));
  if (key.empty()) throw ValidationError("empty key");
  if (value.empty()) throw ValidationError(std::string(key) + ": empty value");
  return {key, value};
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  RunConfig config;
  std::map<std::string, int, std::less<>> seen;
  int line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    try {
      const auto [name, value] = split_assignment(line);
      const Key* key = find_key(name);
      if (!key) throw ValidationError("unknown key '" + std::string(name) + "'");
      if (const auto it = seen.find(name); it != seen.end()) {
        throw ValidationError("duplicate key '" + std::string(name) + "' (first at line " +
                              std::to_string(it->second) + ")");
      }
      seen.emplace(std::string(name), line_no);
      key->set(config, value);
    } catch (const ValidationError& e) {
      throw ValidationError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  for (const auto& [name, key] : keys()) {
    if (key.required && !seen.contains(name)) {
      throw ValidationError("missing required key '" + name + "'");
    }
  }
  try {
    config.params.validate();
  } catch (const ValidationError& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config(buf.str());
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void apply_override(RunConfig& config, std::string_view assignment) {
  try {
    const auto [name, value] = split_assignment(trim(assignment));
    const Key* key = find_key(name);
    if (!key) throw ValidationError("unknown key '" + std::string(name) + "'");
    key->set(config, value);
    config.params.validate();
  } catch (const ValidationError& e) {
    throw ValidationError("override '" + std::string(assignment) + "': " + e.what());
  }
}

std::string dump_config(const RunConfig& config) {
  std::string out;
  for (const auto& [name, key] : keys()) out += name + " = " + key.get(config) + "\n";
  return out;
}

}  // namespace mhdv
