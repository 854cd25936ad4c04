#ifndef FOVEASTREAM_ANALYTICS_HPP_
#define FOVEASTREAM_ANALYTICS_HPP_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "foveastream/gaze.hpp"
#include "foveastream/grid.hpp"

namespace foveastream {

// Maximal run of samples staying within radius_px of its first sample.
struct GazeMoment {
  std::int64_t start_us = 0;
  std::int64_t end_us = 0;
  PixelPoint anchor;
  std::size_t sample_count = 0;

  std::int64_t duration_us() const { return end_us - start_us; }
};

// Greedy single-pass segmentation: a moment opens at a valid sample (the
// anchor) and extends while samples stay within radius_px of the anchor;
// the first sample beyond the radius closes it and anchors the next one.
// Invalid samples are skipped and belong to no moment. Every valid sample
// belongs to exactly one moment. Throws DomainError on radius <= 0 or a
// trace with no valid samples.
std::vector<GazeMoment> gaze_moments(const GazeTrace& trace, double radius_px);

// Pixel distance between consecutive valid samples divided by their time
// difference, in px/s; one value per consecutive pair. Throws DomainError
// with fewer than 2 valid samples or duplicate timestamps.
std::vector<double> change_rate(const GazeTrace& trace);

// Gaussian KDE of gaze positions on a bin grid, normalized so the peak
// bin is exactly 1.
struct HeatmapGrid {
  int rows = 0;
  int cols = 0;
  double bin_size_px = 0.0;
  double bandwidth_px = 0.0;
  std::vector<double> bins;  // row-major

  double at(int row, int col) const {
    return bins[static_cast<std::size_t>(row) * cols + col];
  }
};

// Density at each bin center is the fixed-order sum over valid samples of
// exp(-d^2 / (2 * bandwidth_px^2)); the grid parameter defines the binned
// frame area. Throws DomainError on non-positive bin size or bandwidth,
// or a trace with no valid samples.
HeatmapGrid heatmap(const GazeTrace& trace, const GridSpec& grid,
                    double bin_size_px, double bandwidth_px);

struct EcdfPoint {
  double value = 0.0;
  double fraction = 0.0;
};

// Right-continuous empirical CDF: sorted unique values with
// fraction = count(samples <= value) / n. Throws DomainError on empty or
// non-finite input.
std::vector<EcdfPoint> ecdf(std::span<const double> values);

// End-to-end foveation delay: control-to-photon latency plus one gaze
// sampler interval.
struct LatencyBudget {
  double e2e_ms = 0.0;
  double sampler_interval_ms = 0.0;

  double total_ms() const { return e2e_ms + sampler_interval_ms; }
};

// Throws DomainError on negative e2e_ms or non-positive sampler_hz.
LatencyBudget latency_budget(double e2e_ms, double sampler_hz);

// Pixels the gaze moves during the budget at the given rate.
double shift_during(const LatencyBudget& budget, double rate_px_s);

// CSV with header `start_us,end_us,duration_us,anchor_x,anchor_y`.
void write_moments_csv(std::span<const GazeMoment> moments, std::ostream& out);

// One value per line, no header.
void write_values_lines(std::span<const double> values, std::ostream& out);

// One value per line; blank lines are skipped. Throws ParseError with the
// offending line number.
std::vector<double> load_values_lines(const std::filesystem::path& path);

// CSV with header `value,fraction`.
void write_ecdf_csv(std::span<const EcdfPoint> points, std::ostream& out);

// Bin values as CSV rows.
void write_heatmap_csv(const HeatmapGrid& map, std::ostream& out);

// Plain-text PGM (P2) with gray = round(255 * bin).
void write_heatmap_pgm(const HeatmapGrid& map, std::ostream& out);

}  // namespace foveastream

#endif  // FOVEASTREAM_ANALYTICS_HPP_
