#ifndef FOVEASTREAM_SESSION_HPP_
#define FOVEASTREAM_SESSION_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "foveastream/foveation.hpp"
#include "foveastream/gaze.hpp"
#include "foveastream/grid.hpp"
#include "foveastream/ratemodel.hpp"
#include "foveastream/telemetry.hpp"

namespace foveastream {

// Everything one simulated streaming run needs. seed is the single knob
// for the run's randomness: run_session re-seeds the channel with it so a
// whole session replays from one value.
struct SessionConfig {
  GridSpec grid{1920, 1080, 16};
  FoveationParams fov;
  RateModel rate;
  ChannelSpec channel;
  std::optional<FilterParams> filter;
  double fps = 40.0;
  std::optional<double> duration_s;  // default: span of the trace
  std::uint64_t seed = 0;
};

// Per-frame log entry: which gaze the encoder saw, how stale it was, and
// what the rate model says the frame cost.
struct FrameRecord {
  int frame_index = 0;
  std::int64_t frame_time_us = 0;
  PixelPoint gaze_used;
  std::optional<std::uint32_t> gaze_seq;  // absent before the first arrival
  std::int64_t staleness_us = 0;
  double mean_offset = 0.0;
  double frame_bits = 0.0;
  double savings_fraction = 0.0;
};

// Replays the trace through the (optional) light filter and the simulated
// channel into the foveation engine at config.fps. Frame k is encoded at
// time k/fps against the latest-wins cell content of all arrivals up to
// and including that instant; before any arrival the gaze defaults to the
// frame center (established at time 0). Deterministic given config.seed.
// Throws DomainError on invalid config or an empty trace with no duration.
std::vector<FrameRecord> run_session(const GazeTrace& trace,
                                     const SessionConfig& config);

struct SessionSummary {
  std::size_t frame_count = 0;
  BitrateSummary frame_bits;
  double mean_savings_fraction = 0.0;
  double staleness_p50_us = 0.0;
  double staleness_p90_us = 0.0;
  double staleness_p99_us = 0.0;
};

// Order statistics over a record list. Throws DomainError on empty input.
SessionSummary session_summary(std::span<const FrameRecord> records);

// One JSON object per frame, fixed field order.
void write_records_jsonl(std::span<const FrameRecord> records,
                         std::ostream& out);

// Flat CSV; gaze_seq is empty before the first arrival.
void write_records_csv(std::span<const FrameRecord> records, std::ostream& out);

// Single JSON object.
void write_summary_json(const SessionSummary& summary, std::ostream& out);

}  // namespace foveastream

#endif  // FOVEASTREAM_SESSION_HPP_
