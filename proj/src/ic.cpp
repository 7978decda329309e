#include "mhdv/errors.hpp"
#include "mhdv/spectral_fields.hpp"

#include <array>
#include <string>

namespace mhdv {
namespace {

constexpr std::array<std::pair<IcKind, std::string_view>, 5> kNames{{
    {IcKind::taylor_green, "taylor_green"},
    {IcKind::abc, "abc"},
    {IcKind::single_mode_b, "single_mode_b"},
    {IcKind::elsasser, "elsasser"},
    {IcKind::random_divfree, "random_divfree"},
}};

}  // namespace

std::string_view to_string(IcKind kind) {
  for (const auto& [k, name] : kNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

IcKind parse_ic_kind(std::string_view name) {
  for (const auto& [k, n] : kNames) {
    if (n == name) return k;
  }
  throw ValidationError("unknown initial condition '" + std::string(name) +
                        "' (expected taylor_green, abc, single_mode_b, elsasser or random_divfree)");
}

}  // namespace mhdv
