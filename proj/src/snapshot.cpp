#include "asbq/snapshot.hpp"

#include <fstream>
#include <optional>

#include "asbq/binary_io.hpp"

namespace asbq {

void write_snapshot(std::ostream& out, const WaveState& s, const ModelParams& p) {
  s.validate();
  const TorusGrid& g = s.grid;
  out.write("ASBQ", 4);
  binary::put<std::uint32_t>(out, kSnapshotVersion);
  binary::put<std::uint8_t>(out, static_cast<std::uint8_t>(g.dims()));
  binary::put<std::uint64_t>(out, g.nx());
  binary::put<std::uint64_t>(out, g.ny());
  binary::put<double>(out, g.lx());
  binary::put<double>(out, g.ly());
  binary::put<double>(out, p.eps_nl);
  binary::put<double>(out, p.eps_disp);
  binary::put<double>(out, s.t);
  binary::put_doubles(out, s.eta);
  binary::put_doubles(out, s.vx);
  if (!g.is_1d()) binary::put_doubles(out, s.vy);
  if (!out) throw std::runtime_error("snapshot write failed");
}

Snapshot read_snapshot(std::istream& in) {
  binary::expect_magic(in, "ASBQ");
  const auto version = binary::get<std::uint32_t>(in, "version");
  if (version != kSnapshotVersion) {
    throw FormatError("unsupported snapshot version " + std::to_string(version));
  }
  const int dims = binary::get<std::uint8_t>(in, "dims");
  const auto nx = binary::get<std::uint64_t>(in, "N_x");
  const auto ny = binary::get<std::uint64_t>(in, "N_y");
  const double lx = binary::get<double>(in, "L_x");
  const double ly = binary::get<double>(in, "L_y");
  ModelParams p;
  p.eps_nl = binary::get<double>(in, "eps_nl");
  p.eps_disp = binary::get<double>(in, "eps_disp");
  const double t = binary::get<double>(in, "t");

  if (dims != 1 && dims != 2) throw FormatError("bad dims " + std::to_string(dims));
  if (dims == 1 && (ny != 1 || ly != 0.0)) throw FormatError("1D snapshot must have N_y = 1, L_y = 0");
  // Caps the allocation a corrupt header could request.
  if (nx > (1u << 24) || ny > (1u << 24) || nx * ny > (std::uint64_t{1} << 28)) {
    throw FormatError("snapshot grid too large");
  }
  std::optional<TorusGrid> grid;
  try {
    grid = dims == 1 ? make_grid_1d(nx, lx) : make_grid_2d(nx, ny, lx, ly);
  } catch (const GridError& e) {
    throw FormatError(std::string("snapshot header: ") + e.what());
  }
  WaveState s = WaveState::rest(*grid, t);
  binary::get_doubles(in, s.eta, "eta");
  binary::get_doubles(in, s.vx, "vx");
  if (dims == 2) binary::get_doubles(in, s.vy, "vy");
  return Snapshot{std::move(s), p};
}

void save_snapshot(const std::string& path, const WaveState& s, const ModelParams& p) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_snapshot(out, s, p);
}

Snapshot load_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_snapshot(in);
}

}  // namespace asbq
