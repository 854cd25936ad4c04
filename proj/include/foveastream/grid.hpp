#ifndef FOVEASTREAM_GRID_HPP_
#define FOVEASTREAM_GRID_HPP_

#include <cmath>

namespace foveastream {

// Frame geometry and macroblock tiling. Width/height are in pixels; the
// frame is tiled into mb_size_px x mb_size_px macroblocks, edge blocks may
// be partial but count as full blocks everywhere.
class GridSpec {
 public:
  // Throws DomainError unless frame_width_px >= mb_size_px,
  // frame_height_px >= mb_size_px and mb_size_px > 0.
  GridSpec(int frame_width_px, int frame_height_px, int mb_size_px = 16);

  int frame_width_px() const { return frame_width_px_; }
  int frame_height_px() const { return frame_height_px_; }
  int mb_size_px() const { return mb_size_px_; }

  int mb_cols() const { return mb_cols_; }
  int mb_rows() const { return mb_rows_; }
  int mb_count() const { return mb_cols_ * mb_rows_; }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

 private:
  int frame_width_px_;
  int frame_height_px_;
  int mb_size_px_;
  int mb_cols_;
  int mb_rows_;
};

// Screen-space point in pixels. Origin top-left, y grows downward.
// Construction never clamps; clamping is an explicit operation.
struct PixelPoint {
  double x_px = 0.0;
  double y_px = 0.0;

  friend bool operator==(const PixelPoint&, const PixelPoint&) = default;
};

// Macroblock index: i = column, j = row.
struct MbIndex {
  int i = 0;
  int j = 0;

  friend bool operator==(const MbIndex&, const MbIndex&) = default;
};

// Macroblock containing p, by floor division. Requires p inside
// [0, FW) x [0, FH); throws DomainError naming the offending coordinate
// otherwise (run clamp_to_frame first for raw tracker data).
MbIndex mb_index_of(const GridSpec& grid, PixelPoint p);

// Clamps each coordinate into [0, dim - 1]. Idempotent. Throws DomainError
// on non-finite input.
PixelPoint clamp_to_frame(const GridSpec& grid, PixelPoint p);

inline double distance(PixelPoint a, PixelPoint b) {
  return std::hypot(a.x_px - b.x_px, a.y_px - b.y_px);
}

}  // namespace foveastream

#endif  // FOVEASTREAM_GRID_HPP_
