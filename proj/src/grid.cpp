#include "foveastream/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "foveastream/errors.hpp"

namespace foveastream {

GridSpec::GridSpec(int frame_width_px, int frame_height_px, int mb_size_px)
    : frame_width_px_(frame_width_px),
      frame_height_px_(frame_height_px),
      mb_size_px_(mb_size_px) {
  if (mb_size_px_ <= 0) {
    throw DomainError("mb_size_px must be > 0, got " + std::to_string(mb_size_px_));
  }
  if (frame_width_px_ < mb_size_px_ || frame_height_px_ < mb_size_px_) {
    throw DomainError("frame " + std::to_string(frame_width_px_) + "x" +
                      std::to_string(frame_height_px_) +
                      " is smaller than one macroblock (" +
                      std::to_string(mb_size_px_) + " px)");
  }
  mb_cols_ = (frame_width_px_ + mb_size_px_ - 1) / mb_size_px_;
  mb_rows_ = (frame_height_px_ + mb_size_px_ - 1) / mb_size_px_;
}

MbIndex mb_index_of(const GridSpec& grid, PixelPoint p) {
  if (!(p.x_px >= 0.0 && p.x_px < grid.frame_width_px())) {
    throw DomainError("x_px=" + std::to_string(p.x_px) + " outside [0, " +
                      std::to_string(grid.frame_width_px()) + ")");
  }
  if (!(p.y_px >= 0.0 && p.y_px < grid.frame_height_px())) {
    throw DomainError("y_px=" + std::to_string(p.y_px) + " outside [0, " +
                      std::to_string(grid.frame_height_px()) + ")");
  }
  const int i = static_cast<int>(std::floor(p.x_px / grid.mb_size_px()));
  const int j = static_cast<int>(std::floor(p.y_px / grid.mb_size_px()));
  return MbIndex{i, j};
}

PixelPoint clamp_to_frame(const GridSpec& grid, PixelPoint p) {
  if (!std::isfinite(p.x_px) || !std::isfinite(p.y_px)) {
    throw DomainError("cannot clamp non-finite point");
  }
  return PixelPoint{
      std::clamp(p.x_px, 0.0, static_cast<double>(grid.frame_width_px() - 1)),
      std::clamp(p.y_px, 0.0, static_cast<double>(grid.frame_height_px() - 1))};
}

}  // namespace foveastream
