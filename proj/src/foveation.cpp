#include "foveastream/foveation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <string>
#include <utility>

#include "foveastream/errors.hpp"

namespace foveastream {

FoveationParams params_from_fraction(double qo_max, double w_fraction,
                                     const GridSpec& grid, double base_qp) {
  FoveationParams params;
  params.qo_max = qo_max;
  params.w_px = w_fraction * grid.frame_width_px();
  params.base_qp = base_qp;
  validate(params);
  return params;
}

void validate(const FoveationParams& params) {
  if (!(params.qo_max >= 0.0) || !std::isfinite(params.qo_max)) {
    throw DomainError("qo_max must be >= 0, got " + std::to_string(params.qo_max));
  }
  if (!(params.w_px > 0.0) || !std::isfinite(params.w_px)) {
    throw DomainError("w_px must be > 0, got " + std::to_string(params.w_px));
  }
  if (!(params.base_qp >= 0.0 && params.base_qp <= 51.0)) {
    throw DomainError("base_qp must be in [0, 51], got " +
                      std::to_string(params.base_qp));
  }
}

OffsetMap::OffsetMap(GridSpec grid, MbIndex gaze_mb, std::vector<double> values)
    : grid_(grid), gaze_mb_(gaze_mb), values_(std::move(values)) {
  if (values_.size() != static_cast<std::size_t>(grid_.mb_count())) {
    throw DomainError("offset map has " + std::to_string(values_.size()) +
                      " values, grid needs " + std::to_string(grid_.mb_count()));
  }
  if (gaze_mb_.i < 0 || gaze_mb_.i >= grid_.mb_cols() || gaze_mb_.j < 0 ||
      gaze_mb_.j >= grid_.mb_rows()) {
    throw DomainError("gaze macroblock (" + std::to_string(gaze_mb_.i) + ", " +
                      std::to_string(gaze_mb_.j) + ") outside grid");
  }
}

double OffsetMap::at(int i, int j) const {
  if (i < 0 || i >= grid_.mb_cols() || j < 0 || j >= grid_.mb_rows()) {
    throw DomainError("macroblock index (" + std::to_string(i) + ", " +
                      std::to_string(j) + ") outside " +
                      std::to_string(grid_.mb_cols()) + "x" +
                      std::to_string(grid_.mb_rows()) + " grid");
  }
  return values_[static_cast<std::size_t>(j) * grid_.mb_cols() + i];
}

double OffsetMap::mean() const {
  const double sum = std::accumulate(values_.begin(), values_.end(), 0.0);
  return sum / static_cast<double>(values_.size());
}

OffsetMap compute_offset_map(const GridSpec& grid,
                             const FoveationParams& params, PixelPoint gaze) {
  validate(params);
  const MbIndex g = mb_index_of(grid, gaze);
  const double w_mb = params.w_px / grid.mb_size_px();
  const double inv_denom = 1.0 / (2.0 * w_mb * w_mb);

  std::vector<double> values(static_cast<std::size_t>(grid.mb_count()));
  std::size_t idx = 0;
  for (int j = 0; j < grid.mb_rows(); ++j) {
    const double dy = j - g.j;
    for (int i = 0; i < grid.mb_cols(); ++i, ++idx) {
      const double dx = i - g.i;
      const double d2 = dx * dx + dy * dy;
      // -expm1 evaluates 1 - exp(-t) without cancellation near the fovea.
      values[idx] = params.qo_max * -std::expm1(-d2 * inv_denom);
    }
  }
  return OffsetMap(grid, g, std::move(values));
}

int effective_qp(const OffsetMap& map, const FoveationParams& params, int i,
                 int j) {
  const double raw = params.base_qp + map.at(i, j);
  const int rounded = static_cast<int>(std::floor(raw + 0.5));
  return std::clamp(rounded, 0, 51);
}

void write_offset_pgm(const OffsetMap& map, double qo_max, std::ostream& out) {
  const GridSpec& grid = map.grid();
  out << "P2\n" << grid.mb_cols() << ' ' << grid.mb_rows() << "\n255\n";
  for (int j = 0; j < grid.mb_rows(); ++j) {
    for (int i = 0; i < grid.mb_cols(); ++i) {
      const int gray =
          qo_max > 0.0
              ? static_cast<int>(std::lround(255.0 * map.at(i, j) / qo_max))
              : 0;
      out << gray << (i + 1 == grid.mb_cols() ? '\n' : ' ');
    }
  }
}

void write_offset_csv(const OffsetMap& map, std::ostream& out) {
  const GridSpec& grid = map.grid();
  char buf[32];
  for (int j = 0; j < grid.mb_rows(); ++j) {
    for (int i = 0; i < grid.mb_cols(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", map.at(i, j));
      out << buf << (i + 1 == grid.mb_cols() ? '\n' : ',');
    }
  }
}

}  // namespace foveastream
