#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "asbq/binary_io.hpp"
#include "asbq/model.hpp"

namespace asbq {

inline constexpr std::uint32_t kSnapshotVersion = 1;

/// State plus the model parameters it was produced with.
struct Snapshot {
  WaveState state;
  ModelParams params;
};

/// "ASBQ", u32 version, u8 dims, u64 N_x, N_y, f64 L_x, L_y, eps_nl, eps_disp,
/// t, then eta, vx, vy as row-major little-endian f64. A 1D state is stored
/// with N_y = 1, L_y = 0 and no vy block.
void write_snapshot(std::ostream& out, const WaveState& s, const ModelParams& p);
Snapshot read_snapshot(std::istream& in);

void save_snapshot(const std::string& path, const WaveState& s, const ModelParams& p);
Snapshot load_snapshot(const std::string& path);

}  // namespace asbq
