#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "asbq/grid.hpp"
#include "asbq/model.hpp"

namespace asbq {

struct FieldNorms {
  double linf = 0.0;
  double l2 = 0.0;
  double l4 = 0.0;
  double h1 = 0.0;
};

/// One row of the norm time series. vy norms and curl_l2 stay zero in 1D.
struct NormRecord {
  double t = 0.0;
  FieldNorms eta;
  FieldNorms vx;
  FieldNorms vy;
  double min_eta = 0.0;
  double cavitation = 1.0;
  double mean_eta = 0.0;
  double mean_vx = 0.0;
  double mean_vy = 0.0;
  double curl_l2 = 0.0;
  double tail_ratio = 0.0;

  bool finite() const;
};

inline constexpr double kTailRatioWarning = 1e-6;

/// Largest |c_k| with |k| >= 0.9 k_max on some axis, over the global largest
/// |c_k|, maximized over the fields. 0 for a zero state.
double spectral_tail_ratio(const WaveState& s);

/// Grid extremum of one field, with its node.
struct Extremum {
  double value = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  double x = 0.0;
  double y = 0.0;
};

Extremum field_min(const WaveState& s, Field f);
Extremum field_max(const WaveState& s, Field f);

NormRecord record(const WaveState& s, const ModelParams& p);

/// Divides every norm entry (the FieldNorms members) by its value in the first
/// record. Entries whose first value is zero are left as they are; the other
/// columns are never rescaled.
std::vector<NormRecord> normalize_at_t0(std::span<const NormRecord> series);

void write_norms_csv_header(std::ostream& out);
void write_norms_csv_row(std::ostream& out, const NormRecord& r);

/// Samples along the x axis (row through y = 0) or the y axis (column through
/// x = 0). vy is empty in 1D.
struct AxisSlice {
  Axis axis = Axis::x;
  double t = 0.0;
  std::vector<double> coord;
  std::vector<double> eta;
  std::vector<double> vx;
  std::vector<double> vy;
};

AxisSlice axis_slice(const WaveState& s, Axis axis);

/// Long format for waterfall plots: t,axis,coord,eta,vx,vy.
void write_slice_csv_header(std::ostream& out);
void write_slice_csv_rows(std::ostream& out, const AxisSlice& slice);

}  // namespace asbq
