#pragma once

#include "mhdv/state.hpp"
#include "mhdv/timestepper.hpp"

#include <filesystem>
#include <string>

namespace mhdv {

/// Binary snapshot, little-endian throughout.
///
/// Header (53 bytes): "MHDV", u32 version = 1, u32 n, f64 alpha, f64 mu,
/// f64 nu, f64 t, u64 step, u8 field_count = 2.  Payload: u then B; modes
/// with k3 fastest, then k2, then k1, each axis running -n/2 .. n/2-1;
/// per mode the three components as (re, im) f64 pairs.  Modes outside
/// the dealias mask are stored as explicit zeros.
inline constexpr std::uint32_t kSnapshotVersion = 1;
inline constexpr std::size_t kSnapshotHeaderBytes = 53;

struct Snapshot {
  SimState<double> state;
  SimParams params;  ///< n, alpha, mu and nu are set; the rest are defaults
};

std::string encode_snapshot(const SimState<double>& state, const SimParams& params);

/// `source` names the origin in error messages.
Snapshot decode_snapshot(std::string_view bytes, const std::string& source = "<memory>");

void save_snapshot(const SimState<double>& state, const SimParams& params,
                   const std::filesystem::path& path);
Snapshot load_snapshot(const std::filesystem::path& path);

/// A checkpoint is a snapshot plus a `<path>.resume` sidecar holding the
/// energy budget (initial energy and dissipation so far) as hex floats.
void save_checkpoint(const ResumePoint<double>& point, const SimParams& params,
                     const std::filesystem::path& path);

struct Checkpoint {
  ResumePoint<double> point;
  SimParams params;
};

Checkpoint load_checkpoint(const std::filesystem::path& path);

/// Write `contents` to `path` through a temporary file and a rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);
std::string read_file(const std::filesystem::path& path);

}  // namespace mhdv
