#include "foveastream/gaze.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

#include "foveastream/errors.hpp"
#include "foveastream/rng.hpp"

namespace foveastream {

namespace {

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') {
    line.pop_back();
  }
  return line;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    fields.push_back(cell);
  }
  if (!line.empty() && line.back() == ',') {
    fields.emplace_back();
  }
  return fields;
}

std::int64_t parse_i64(const std::string& text, const char* what, int line_no) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(text, &pos);
    if (pos != text.size()) {
      throw std::invalid_argument(text);
    }
    return v;
  } catch (const std::exception&) {
    throw ParseError(std::string("bad ") + what + " '" + text + "'", line_no);
  }
}

double parse_real(const std::string& text, const char* what, int line_no) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(text, &pos);
    if (pos != text.size() || !std::isfinite(v)) {
      throw std::invalid_argument(text);
    }
    return v;
  } catch (const std::exception&) {
    throw ParseError(std::string("bad ") + what + " '" + text + "'", line_no);
  }
}

}  // namespace

GazeTrace load_trace(const std::filesystem::path& path, const GridSpec& grid) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open trace file: " + path.string());
  }

  std::string line;
  if (!std::getline(in, line)) {
    throw ParseError("trace file is empty (missing header): " + path.string());
  }
  line = strip_cr(line);

  bool has_valid_column = false;
  if (line == "timestamp_us,x_px,y_px") {
    has_valid_column = false;
  } else if (line == "timestamp_us,x_px,y_px,valid") {
    has_valid_column = true;
  } else {
    throw ParseError("unexpected trace header '" + line + "'", 1);
  }

  GazeTrace trace{grid, {}};
  int line_no = 1;
  std::uint32_t seq = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) {
      continue;
    }
    const std::vector<std::string> fields = split_csv(line);
    const std::size_t expected = has_valid_column ? 4 : 3;
    if (fields.size() != expected) {
      throw ParseError("expected " + std::to_string(expected) +
                           " fields, got " + std::to_string(fields.size()),
                       line_no);
    }

    GazeSample sample;
    sample.timestamp_us = parse_i64(fields[0], "timestamp_us", line_no);
    sample.point.x_px = parse_real(fields[1], "x_px", line_no);
    sample.point.y_px = parse_real(fields[2], "y_px", line_no);
    if (has_valid_column) {
      if (fields[3] == "0") {
        sample.valid = false;
      } else if (fields[3] == "1") {
        sample.valid = true;
      } else {
        throw ParseError("bad valid flag '" + fields[3] + "' (want 0 or 1)",
                         line_no);
      }
    }
    if (sample.timestamp_us < 0) {
      throw ParseError("negative timestamp " +
                           std::to_string(sample.timestamp_us),
                       line_no);
    }
    if (!trace.samples.empty() &&
        sample.timestamp_us <= trace.samples.back().timestamp_us) {
      throw ParseError("timestamp " + std::to_string(sample.timestamp_us) +
                           " is not after previous " +
                           std::to_string(trace.samples.back().timestamp_us),
                       line_no);
    }
    sample.seq = seq++;
    trace.samples.push_back(sample);
  }
  return trace;
}

void save_trace(const GazeTrace& trace, std::ostream& out) {
  out << "timestamp_us,x_px,y_px,valid\n";
  char buf[96];
  for (const GazeSample& s : trace.samples) {
    std::snprintf(buf, sizeof(buf), "%lld,%.3f,%.3f,%d\n",
                  static_cast<long long>(s.timestamp_us), s.point.x_px,
                  s.point.y_px, s.valid ? 1 : 0);
    out << buf;
  }
}

GazeTrace light_filter(const GazeTrace& trace, const FilterParams& params) {
  if (!(params.alpha_slow > 0.0 && params.alpha_slow <= 1.0)) {
    throw DomainError("alpha_slow must be in (0, 1], got " +
                      std::to_string(params.alpha_slow));
  }
  if (!(params.saccade_speed_px_s > 0.0)) {
    throw DomainError("saccade_speed_px_s must be > 0, got " +
                      std::to_string(params.saccade_speed_px_s));
  }

  GazeTrace out{trace.grid, trace.samples};
  for (std::size_t k = 1; k < trace.samples.size(); ++k) {
    const GazeSample& raw = trace.samples[k];
    const GazeSample& prev_raw = trace.samples[k - 1];
    const std::int64_t dt_us = raw.timestamp_us - prev_raw.timestamp_us;
    if (dt_us <= 0) {
      throw DomainError("trace timestamps must be strictly increasing");
    }
    const double speed =
        distance(raw.point, prev_raw.point) / (static_cast<double>(dt_us) / 1e6);
    if (speed > params.saccade_speed_px_s) {
      out.samples[k].point = raw.point;  // saccade: reset, no smoothing lag
    } else {
      const PixelPoint prev_out = out.samples[k - 1].point;
      const double a = params.alpha_slow;
      out.samples[k].point =
          PixelPoint{a * raw.point.x_px + (1.0 - a) * prev_out.x_px,
                     a * raw.point.y_px + (1.0 - a) * prev_out.y_px};
    }
  }
  return out;
}

TraceKind trace_kind_from_string(std::string_view name) {
  if (name == "fixate") return TraceKind::kFixate;
  if (name == "step") return TraceKind::kStep;
  if (name == "spiral") return TraceKind::kSpiral;
  if (name == "random_walk") return TraceKind::kRandomWalk;
  throw DomainError("unknown trace kind '" + std::string(name) +
                    "' (want fixate|step|spiral|random_walk)");
}

GazeTrace generate_synthetic_trace(TraceKind kind, double duration_s,
                                   double rate_hz, std::uint64_t seed,
                                   const GridSpec& grid) {
  if (!(duration_s > 0.0) || !std::isfinite(duration_s)) {
    throw DomainError("duration_s must be > 0");
  }
  if (!(rate_hz > 0.0) || !(rate_hz <= 1e6)) {
    throw DomainError("rate_hz must be in (0, 1e6]");
  }

  const double fw = grid.frame_width_px();
  const double fh = grid.frame_height_px();
  const PixelPoint center{fw / 2.0, fh / 2.0};
  const std::size_t count =
      static_cast<std::size_t>(std::floor(duration_s * rate_hz));
  const double interval_us = 1e6 / rate_hz;

  GazeTrace trace{grid, {}};
  trace.samples.reserve(count);

  Rng rng(seed);
  PixelPoint walk = center;
  for (std::size_t k = 0; k < count; ++k) {
    GazeSample s;
    s.timestamp_us = std::llround(static_cast<double>(k) * interval_us);
    s.seq = static_cast<std::uint32_t>(k);
    const double t_s = static_cast<double>(s.timestamp_us) / 1e6;

    switch (kind) {
      case TraceKind::kFixate:
        s.point = center;
        break;
      case TraceKind::kStep: {
        const bool left = static_cast<std::int64_t>(t_s) % 2 == 0;
        s.point = PixelPoint{left ? fw / 4.0 : 3.0 * fw / 4.0, fh / 2.0};
        break;
      }
      case TraceKind::kSpiral: {
        const double r = 0.45 * std::min(fw, fh) * (t_s / duration_s);
        const double theta = 2.0 * std::numbers::pi * 0.5 * t_s;
        s.point = PixelPoint{center.x_px + r * std::cos(theta),
                             center.y_px + r * std::sin(theta)};
        break;
      }
      case TraceKind::kRandomWalk: {
        if (k > 0) {
          // Mostly fixation jitter, occasionally a large relocation.
          const bool jump = rng.uniform01() < 0.02;
          const double sx = jump ? fw / 6.0 : fw / 480.0;
          const double sy = jump ? fh / 6.0 : fh / 480.0;
          walk.x_px += rng.normal(0.0, sx);
          walk.y_px += rng.normal(0.0, sy);
          walk = clamp_to_frame(grid, walk);
        }
        s.point = walk;
        break;
      }
    }
    s.point = clamp_to_frame(grid, s.point);
    trace.samples.push_back(s);
  }
  return trace;
}

}  // namespace foveastream
