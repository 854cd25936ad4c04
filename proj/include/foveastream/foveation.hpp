#ifndef FOVEASTREAM_FOVEATION_HPP_
#define FOVEASTREAM_FOVEATION_HPP_

#include <iosfwd>
#include <span>
#include <vector>

#include "foveastream/grid.hpp"

namespace foveastream {

// Tunables of the gaze-driven quality falloff. w_px is the Gaussian width
// in pixels; it is divided by the macroblock size before use, so the foveal
// region's physical size does not depend on the tiling.
struct FoveationParams {
  double qo_max = 10.0;   // maximum QP offset, >= 0
  double w_px = 240.0;    // foveal width parameter, > 0
  double base_qp = 28.0;  // stand-in for the encoder's own QP choice, [0, 51]
};

// Resolves a width given as a fraction of the frame width (e.g. 0.125).
FoveationParams params_from_fraction(double qo_max, double w_fraction,
                                     const GridSpec& grid,
                                     double base_qp = 28.0);

// Throws DomainError when any field is out of range.
void validate(const FoveationParams& params);

// Per-macroblock QP offsets for one gaze position. Offsets are kept at full
// real precision; rounding happens only in effective_qp.
class OffsetMap {
 public:
  // values is row-major, mb_rows x mb_cols; throws DomainError on a size or
  // gaze-index mismatch.
  OffsetMap(GridSpec grid, MbIndex gaze_mb, std::vector<double> values);

  const GridSpec& grid() const { return grid_; }
  MbIndex gaze_mb() const { return gaze_mb_; }

  // i = column, j = row. Bounds-checked; throws DomainError.
  double at(int i, int j) const;

  std::span<const double> values() const { return values_; }
  double mean() const;

 private:
  GridSpec grid_;
  MbIndex gaze_mb_;
  std::vector<double> values_;
};

// Gaussian offset map around the gaze point:
//   QO(i, j) = qo_max * (1 - exp(-((i-x)^2 + (j-y)^2) / (2 * W_mb^2)))
// with (x, y) the gaze macroblock and W_mb = w_px / mb_size_px. Offsets are
// 0 at the gaze block and rise smoothly toward qo_max with distance.
// The gaze point must already be clamped into the frame.
OffsetMap compute_offset_map(const GridSpec& grid,
                             const FoveationParams& params, PixelPoint gaze);

// base_qp + QO(i, j), rounded half up and clamped into [0, 51].
int effective_qp(const OffsetMap& map, const FoveationParams& params, int i,
                 int j);

// Plain-text PGM (P2) with gray = round(255 * QO / qo_max); all zeros when
// qo_max is 0.
void write_offset_pgm(const OffsetMap& map, double qo_max, std::ostream& out);

// Raw offsets as CSV, one row of comma-separated reals per macroblock row.
void write_offset_csv(const OffsetMap& map, std::ostream& out);

}  // namespace foveastream

#endif  // FOVEASTREAM_FOVEATION_HPP_
