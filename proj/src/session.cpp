#include "foveastream/session.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include <json.hpp>

#include "foveastream/errors.hpp"

namespace foveastream {

namespace {

void validate_trace(const GazeTrace& trace) {
  std::int64_t prev_ts = -1;
  for (const GazeSample& s : trace.samples) {
    if (s.timestamp_us < 0) {
      throw DomainError("trace timestamps must be >= 0");
    }
    if (s.timestamp_us <= prev_ts) {
      throw DomainError("trace timestamps must be strictly increasing");
    }
    if (!std::isfinite(s.point.x_px) || !std::isfinite(s.point.y_px)) {
      throw DomainError("trace points must be finite");
    }
    prev_ts = s.timestamp_us;
  }
}

std::vector<TimedMessage> to_messages(const GazeTrace& trace) {
  const double fw = trace.grid.frame_width_px();
  const double fh = trace.grid.frame_height_px();
  std::vector<TimedMessage> messages;
  messages.reserve(trace.samples.size());
  for (const GazeSample& s : trace.samples) {
    if (!s.valid) {
      continue;  // an invalid sample carries no gaze location to transmit
    }
    const PixelPoint p = clamp_to_frame(trace.grid, s.point);
    GazeMessage msg;
    msg.version = kProtocolVersion;
    msg.flags = 1;
    msg.seq = s.seq;
    msg.timestamp_us = static_cast<std::uint64_t>(s.timestamp_us);
    msg.x_norm = static_cast<float>(p.x_px / fw);
    msg.y_norm = static_cast<float>(p.y_px / fh);
    messages.push_back(TimedMessage{s.timestamp_us, msg});
  }
  return messages;
}

}  // namespace

std::vector<FrameRecord> run_session(const GazeTrace& trace,
                                     const SessionConfig& config) {
  if (!(config.fps > 0.0) || !std::isfinite(config.fps)) {
    throw DomainError("fps must be > 0");
  }
  if (config.duration_s && !(*config.duration_s > 0.0)) {
    throw DomainError("duration_s must be > 0");
  }
  validate(config.fov);
  validate(config.rate);
  validate(config.channel);
  validate_trace(trace);

  std::size_t frame_count = 0;
  if (config.duration_s) {
    frame_count =
        static_cast<std::size_t>(std::floor(*config.duration_s * config.fps));
  } else {
    if (trace.samples.empty()) {
      throw DomainError("empty trace and no duration_s: nothing to simulate");
    }
    const double last_s =
        static_cast<double>(trace.samples.back().timestamp_us) / 1e6;
    frame_count = static_cast<std::size_t>(std::floor(last_s * config.fps)) + 1;
  }

  const GazeTrace filtered =
      config.filter ? light_filter(trace, *config.filter) : trace;
  const std::vector<TimedMessage> messages = to_messages(filtered);

  ChannelSpec channel = config.channel;
  channel.seed = config.seed;
  const std::vector<Arrival> arrivals = channel_transmit(messages, channel);

  const GridSpec& grid = config.grid;
  const double fw = grid.frame_width_px();
  const double fh = grid.frame_height_px();
  const PixelPoint center{fw / 2.0, fh / 2.0};
  const double frame_interval_us = 1e6 / config.fps;

  LatestGazeCell cell;
  std::size_t next_arrival = 0;
  std::vector<FrameRecord> records;
  records.reserve(frame_count);

  for (std::size_t k = 0; k < frame_count; ++k) {
    const std::int64_t frame_time_us =
        std::llround(static_cast<double>(k) * frame_interval_us);

    // Arrivals tied with the frame instant are delivered first, so the
    // frame sees the freshest gaze.
    while (next_arrival < arrivals.size() &&
           arrivals[next_arrival].arrival_time_us <= frame_time_us) {
      cell.offer(arrivals[next_arrival].msg,
                 arrivals[next_arrival].arrival_time_us);
      ++next_arrival;
    }

    FrameRecord rec;
    rec.frame_index = static_cast<int>(k);
    rec.frame_time_us = frame_time_us;
    if (const auto snapshot = cell.read()) {
      rec.gaze_used = clamp_to_frame(
          grid, PixelPoint{static_cast<double>(snapshot->msg.x_norm) * fw,
                           static_cast<double>(snapshot->msg.y_norm) * fh});
      rec.gaze_seq = snapshot->msg.seq;
      rec.staleness_us =
          frame_time_us - static_cast<std::int64_t>(snapshot->msg.timestamp_us);
    } else {
      rec.gaze_used = clamp_to_frame(grid, center);
      rec.gaze_seq = std::nullopt;
      rec.staleness_us = frame_time_us;  // default gaze dates from t = 0
    }

    const OffsetMap map = compute_offset_map(grid, config.fov, rec.gaze_used);
    const BitrateEstimate est = estimate_frame_bits(map, config.rate);
    rec.mean_offset = map.mean();
    rec.frame_bits = est.frame_bits;
    rec.savings_fraction = est.savings_fraction;
    records.push_back(rec);
  }
  return records;
}

SessionSummary session_summary(std::span<const FrameRecord> records) {
  if (records.empty()) {
    throw DomainError("session_summary on empty record list");
  }
  std::vector<double> bits;
  std::vector<double> staleness;
  double savings_sum = 0.0;
  bits.reserve(records.size());
  staleness.reserve(records.size());
  for (const FrameRecord& rec : records) {
    bits.push_back(rec.frame_bits);
    staleness.push_back(static_cast<double>(rec.staleness_us));
    savings_sum += rec.savings_fraction;
  }
  std::sort(staleness.begin(), staleness.end());

  SessionSummary s;
  s.frame_count = records.size();
  s.frame_bits = summarize_bitrates(bits);
  s.mean_savings_fraction = savings_sum / static_cast<double>(records.size());
  s.staleness_p50_us = quantile_sorted(staleness, 0.50);
  s.staleness_p90_us = quantile_sorted(staleness, 0.90);
  s.staleness_p99_us = quantile_sorted(staleness, 0.99);
  return s;
}

void write_records_jsonl(std::span<const FrameRecord> records,
                         std::ostream& out) {
  for (const FrameRecord& rec : records) {
    nlohmann::ordered_json j;
    j["frame_index"] = rec.frame_index;
    j["frame_time_us"] = rec.frame_time_us;
    j["gaze_used"] = {{"x_px", rec.gaze_used.x_px}, {"y_px", rec.gaze_used.y_px}};
    if (rec.gaze_seq) {
      j["gaze_seq"] = *rec.gaze_seq;
    } else {
      j["gaze_seq"] = nullptr;
    }
    j["staleness_us"] = rec.staleness_us;
    j["mean_offset"] = rec.mean_offset;
    j["frame_bits"] = rec.frame_bits;
    j["savings_fraction"] = rec.savings_fraction;
    out << j.dump() << '\n';
  }
}

void write_records_csv(std::span<const FrameRecord> records,
                       std::ostream& out) {
  out << "frame_index,frame_time_us,gaze_x_px,gaze_y_px,gaze_seq,"
         "staleness_us,mean_offset,frame_bits,savings_fraction\n";
  char buf[256];
  for (const FrameRecord& rec : records) {
    const std::string seq =
        rec.gaze_seq ? std::to_string(*rec.gaze_seq) : std::string();
    std::snprintf(buf, sizeof(buf), "%d,%lld,%.3f,%.3f,%s,%lld,%.17g,%.17g,%.17g\n",
                  rec.frame_index, static_cast<long long>(rec.frame_time_us),
                  rec.gaze_used.x_px, rec.gaze_used.y_px, seq.c_str(),
                  static_cast<long long>(rec.staleness_us), rec.mean_offset,
                  rec.frame_bits, rec.savings_fraction);
    out << buf;
  }
}

void write_summary_json(const SessionSummary& summary, std::ostream& out) {
  nlohmann::ordered_json j;
  j["frame_count"] = summary.frame_count;
  j["frame_bits"] = {{"mean", summary.frame_bits.mean},
                     {"median", summary.frame_bits.median},
                     {"q1", summary.frame_bits.q1},
                     {"q3", summary.frame_bits.q3}};
  j["mean_savings_fraction"] = summary.mean_savings_fraction;
  j["staleness_us"] = {{"p50", summary.staleness_p50_us},
                       {"p90", summary.staleness_p90_us},
                       {"p99", summary.staleness_p99_us}};
  out << j.dump(2) << '\n';
}

}  // namespace foveastream
