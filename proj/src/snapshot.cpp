#include "mhdv/snapshot.hpp"

#include "mhdv/errors.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

static_assert(std::endian::native == std::endian::little,
              "snapshot I/O assumes a little-endian host");

namespace mhdv {
namespace {

constexpr char kMagic[4] = {'M', 'H', 'D', 'V'};

template <typename T>
void put(std::string& out, T value) {
  char raw[sizeof(T)];
  std::memcpy(raw, &value, sizeof(T));
  out.append(raw, sizeof(T));
}

class Reader {
 public:
  Reader(std::string_view bytes, const std::string& source) : bytes_(bytes), source_(source) {}

  template <typename T>
  T get() {
    if (bytes_.size() - pos_ < sizeof(T)) fail("truncated file");
    T value;
    std::memcpy(&value, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return value;
  }

  std::size_t remaining() const { return bytes_.size() - pos_; }

  [[noreturn]] void fail(const std::string& what) const {
    throw IoError(source_ + ": " + what);
  }

 private:
  std::string_view bytes_;
  const std::string& source_;
  std::size_t pos_ = 0;
};

/// Flat lattice indices in file order.
std::vector<Index> file_order(const WavenumberGrid<double>& grid) {
  const int n = grid.n();
  std::vector<Index> order;
  order.reserve(std::size_t(grid.size()));
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int c = 0; c < n; ++c) order.push_back(grid.index_of(a - n / 2, b - n / 2, c - n / 2));
    }
  }
  return order;
}

}  // namespace

std::string encode_snapshot(const SimState<double>& state, const SimParams& params) {
  require_same_grid(state.u, state.b);
  const auto& grid = state.u.grid();
  if (grid.n() != params.n) throw ValidationError("snapshot: state grid does not match params.n");
  std::string out;
  out.reserve(kSnapshotHeaderBytes + std::size_t(grid.size()) * 96);
  out.append(kMagic, 4);
  put<std::uint32_t>(out, kSnapshotVersion);
  put<std::uint32_t>(out, std::uint32_t(grid.n()));
  put<double>(out, params.alpha);
  put<double>(out, params.mu);
  put<double>(out, params.nu);
  put<double>(out, state.t);
  put<std::uint64_t>(out, std::uint64_t(state.step_index));
  put<std::uint8_t>(out, 2);
  const auto order = file_order(grid);
  const auto& mask = grid.dealias_mask();
  for (const auto* field : {&state.u, &state.b}) {
    for (Index idx : order) {
      for (int d = 0; d < 3; ++d) {
        const auto c = mask[idx] ? (*field)(idx, d) : std::complex<double>(0, 0);
        put<double>(out, c.real());
        put<double>(out, c.imag());
      }
    }
  }
  return out;
}

Snapshot decode_snapshot(std::string_view bytes, const std::string& source) {
  Reader in(bytes, source);
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0) in.fail("bad magic (not a snapshot)");
  in.get<std::uint32_t>();
  const auto version = in.get<std::uint32_t>();
  if (version != kSnapshotVersion) {
    in.fail("unsupported snapshot version " + std::to_string(version));
  }
  const auto n = in.get<std::uint32_t>();
  if (n < 8 || n % 2 != 0 || n > 4096) in.fail("invalid grid size " + std::to_string(n));
  Snapshot snap;
  snap.params.n = int(n);
  snap.params.alpha = in.get<double>();
  snap.params.mu = in.get<double>();
  snap.params.nu = in.get<double>();
  const double t = in.get<double>();
  const auto step = in.get<std::uint64_t>();
  const auto fields = in.get<std::uint8_t>();
  if (fields != 2) in.fail("expected 2 fields, found " + std::to_string(fields));
  for (double v : {snap.params.alpha, snap.params.mu, snap.params.nu, t}) {
    if (!std::isfinite(v)) in.fail("non-finite value in header");
  }

  auto grid = make_grid<double>(int(n));
  const std::size_t payload = 2 * 3 * std::size_t(grid->size()) * 16;
  if (in.remaining() < payload) {
    in.fail("truncated payload: expected " + std::to_string(payload) + " bytes, found " +
            std::to_string(in.remaining()));
  }
  if (in.remaining() > payload) in.fail("trailing bytes after payload");
  const auto order = file_order(*grid);
  SpectralField<double> u(grid), b(grid);
  for (auto* field : {&u, &b}) {
    for (Index idx : order) {
      for (int d = 0; d < 3; ++d) {
        const double re = in.get<double>();
        const double im = in.get<double>();
        if (!std::isfinite(re) || !std::isfinite(im)) in.fail("non-finite coefficient in payload");
        (*field)(idx, d) = {re, im};
      }
    }
    field->set_divfree(true);
  }
  snap.state = {std::move(u), std::move(b), t, std::int64_t(step)};
  return snap;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out.write(contents.data(), std::streamsize(contents.size()));
    if (!out) throw IoError("write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string() + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void save_snapshot(const SimState<double>& state, const SimParams& params,
                   const std::filesystem::path& path) {
  write_file_atomic(path, encode_snapshot(state, params));
}

Snapshot load_snapshot(const std::filesystem::path& path) {
  return decode_snapshot(read_file(path), path.string());
}

void save_checkpoint(const ResumePoint<double>& point, const SimParams& params,
                     const std::filesystem::path& path) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "initial_energy = %a\ndissipated = %a\n", point.initial_energy,
                point.dissipated);
  auto sidecar = path;
  sidecar += ".resume";
  write_file_atomic(sidecar, buf);
  save_snapshot(point.state, params, path);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  auto snap = load_snapshot(path);
  auto sidecar = path;
  sidecar += ".resume";
  const auto text = read_file(sidecar);
  double energy = 0, dissipated = 0;
  if (std::sscanf(text.c_str(), "initial_energy = %la dissipated = %la", &energy, &dissipated) != 2 ||
      !std::isfinite(energy) || !std::isfinite(dissipated)) {
    throw IoError(sidecar.string() + ": malformed resume data");
  }
  return {{std::move(snap.state), energy, dissipated}, snap.params};
}

}  // namespace mhdv
