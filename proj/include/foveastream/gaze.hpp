#ifndef FOVEASTREAM_GAZE_HPP_
#define FOVEASTREAM_GAZE_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "foveastream/grid.hpp"

namespace foveastream {

struct GazeSample {
  std::int64_t timestamp_us = 0;
  PixelPoint point;
  std::uint32_t seq = 0;
  bool valid = true;
};

// Timestamp-ordered gaze recording. grid declares the coordinate space of
// the sample points. Timestamps are strictly increasing.
struct GazeTrace {
  GridSpec grid;
  std::vector<GazeSample> samples;
};

// Velocity-gated EMA stand-in for the tracker's "light filtering": slow
// motion is smoothed with weight alpha_slow, anything faster than
// saccade_speed_px_s resets the filter to the raw sample so saccades pass
// through with no lag. alpha_slow = 1 is raw passthrough.
struct FilterParams {
  double alpha_slow = 0.4;
  double saccade_speed_px_s = 700.0;
};

// Loads a trace CSV with header `timestamp_us,x_px,y_px` and optional
// fourth column `valid` (0/1). seq is assigned by row order. Throws
// ParseError with the offending line number on malformed rows or
// non-increasing timestamps. A header-only file yields an empty trace.
GazeTrace load_trace(const std::filesystem::path& path, const GridSpec& grid);

// Writes the trace CSV format back out: integer timestamps, coordinates
// with 3 fractional digits, `valid` column always present.
void save_trace(const GazeTrace& trace, std::ostream& out);

// Applies the light filter. Length, timestamps, seq and valid flags are
// preserved; only the points move. Throws DomainError on invalid params
// or non-increasing timestamps.
GazeTrace light_filter(const GazeTrace& trace, const FilterParams& params);

enum class TraceKind {
  kFixate,      // constant gaze at frame center
  kStep,        // alternates between two anchors once per second
  kSpiral,      // outward spiral from frame center
  kRandomWalk,  // jittery walk with occasional large jumps
};

// Parses fixate|step|spiral|random_walk; throws DomainError otherwise.
TraceKind trace_kind_from_string(std::string_view name);

// Deterministic synthetic trace: floor(duration_s * rate_hz) samples, all
// points clamped to the frame, identical output for identical seeds.
GazeTrace generate_synthetic_trace(TraceKind kind, double duration_s,
                                   double rate_hz, std::uint64_t seed,
                                   const GridSpec& grid);

}  // namespace foveastream

#endif  // FOVEASTREAM_GAZE_HPP_
