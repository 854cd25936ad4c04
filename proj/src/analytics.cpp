#include "foveastream/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>

#include "foveastream/errors.hpp"

namespace foveastream {

std::vector<GazeMoment> gaze_moments(const GazeTrace& trace, double radius_px) {
  if (!(radius_px > 0.0) || !std::isfinite(radius_px)) {
    throw DomainError("radius_px must be > 0, got " + std::to_string(radius_px));
  }

  std::vector<GazeMoment> moments;
  bool open = false;
  GazeMoment current;
  for (const GazeSample& s : trace.samples) {
    if (!s.valid) {
      continue;
    }
    if (open && distance(s.point, current.anchor) <= radius_px) {
      current.end_us = s.timestamp_us;
      ++current.sample_count;
      continue;
    }
    if (open) {
      moments.push_back(current);
    }
    current = GazeMoment{s.timestamp_us, s.timestamp_us, s.point, 1};
    open = true;
  }
  if (open) {
    moments.push_back(current);
  }
  if (moments.empty()) {
    throw DomainError("trace has no valid samples");
  }
  return moments;
}

std::vector<double> change_rate(const GazeTrace& trace) {
  std::vector<double> rates;
  const GazeSample* prev = nullptr;
  for (const GazeSample& s : trace.samples) {
    if (!s.valid) {
      continue;
    }
    if (prev) {
      const std::int64_t dt_us = s.timestamp_us - prev->timestamp_us;
      if (dt_us == 0) {
        throw DomainError("duplicate timestamp " +
                          std::to_string(s.timestamp_us) +
                          " in change_rate input");
      }
      const double dt_s = static_cast<double>(dt_us) / 1e6;
      rates.push_back(distance(s.point, prev->point) / dt_s);
    }
    prev = &s;
  }
  if (rates.empty()) {
    throw DomainError("change_rate needs at least 2 valid samples");
  }
  return rates;
}

HeatmapGrid heatmap(const GazeTrace& trace, const GridSpec& grid,
                    double bin_size_px, double bandwidth_px) {
  if (!(bin_size_px > 0.0) || !std::isfinite(bin_size_px)) {
    throw DomainError("bin_size_px must be > 0");
  }
  if (!(bandwidth_px > 0.0) || !std::isfinite(bandwidth_px)) {
    throw DomainError("bandwidth_px must be > 0");
  }

  HeatmapGrid map;
  map.bin_size_px = bin_size_px;
  map.bandwidth_px = bandwidth_px;
  map.cols = static_cast<int>(
      std::ceil(grid.frame_width_px() / bin_size_px));
  map.rows = static_cast<int>(
      std::ceil(grid.frame_height_px() / bin_size_px));
  map.bins.assign(static_cast<std::size_t>(map.rows) * map.cols, 0.0);

  const bool any_valid =
      std::any_of(trace.samples.begin(), trace.samples.end(),
                  [](const GazeSample& s) { return s.valid; });
  if (!any_valid) {
    throw DomainError("heatmap needs at least one valid sample");
  }

  const double inv_denom = 1.0 / (2.0 * bandwidth_px * bandwidth_px);
  std::size_t idx = 0;
  for (int r = 0; r < map.rows; ++r) {
    const double cy = (r + 0.5) * bin_size_px;
    for (int c = 0; c < map.cols; ++c, ++idx) {
      const double cx = (c + 0.5) * bin_size_px;
      double density = 0.0;
      for (const GazeSample& s : trace.samples) {
        if (!s.valid) {
          continue;
        }
        const double dx = cx - s.point.x_px;
        const double dy = cy - s.point.y_px;
        density += std::exp(-(dx * dx + dy * dy) * inv_denom);
      }
      map.bins[idx] = density;
    }
  }

  const double peak = *std::max_element(map.bins.begin(), map.bins.end());
  for (double& v : map.bins) {
    v /= peak;
  }
  return map;
}

std::vector<EcdfPoint> ecdf(std::span<const double> values) {
  if (values.empty()) {
    throw DomainError("ecdf of empty input");
  }
  std::vector<double> sorted(values.begin(), values.end());
  for (double v : sorted) {
    if (!std::isfinite(v)) {
      throw DomainError("ecdf requires finite values");
    }
  }
  std::sort(sorted.begin(), sorted.end());

  std::vector<EcdfPoint> points;
  const double n = static_cast<double>(sorted.size());
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    if (k + 1 < sorted.size() && sorted[k + 1] == sorted[k]) {
      continue;  // only the last of a tie carries the cumulative count
    }
    points.push_back(EcdfPoint{sorted[k], static_cast<double>(k + 1) / n});
  }
  return points;
}

LatencyBudget latency_budget(double e2e_ms, double sampler_hz) {
  if (!(e2e_ms >= 0.0) || !std::isfinite(e2e_ms)) {
    throw DomainError("e2e_ms must be >= 0");
  }
  if (!(sampler_hz > 0.0) || !std::isfinite(sampler_hz)) {
    throw DomainError("sampler_hz must be > 0");
  }
  return LatencyBudget{e2e_ms, 1000.0 / sampler_hz};
}

double shift_during(const LatencyBudget& budget, double rate_px_s) {
  if (!(rate_px_s >= 0.0) || !std::isfinite(rate_px_s)) {
    throw DomainError("rate_px_s must be >= 0");
  }
  return rate_px_s * budget.total_ms() / 1000.0;
}

void write_moments_csv(std::span<const GazeMoment> moments, std::ostream& out) {
  out << "start_us,end_us,duration_us,anchor_x,anchor_y\n";
  char buf[160];
  for (const GazeMoment& m : moments) {
    std::snprintf(buf, sizeof(buf), "%lld,%lld,%lld,%.3f,%.3f\n",
                  static_cast<long long>(m.start_us),
                  static_cast<long long>(m.end_us),
                  static_cast<long long>(m.duration_us()), m.anchor.x_px,
                  m.anchor.y_px);
    out << buf;
  }
}

void write_values_lines(std::span<const double> values, std::ostream& out) {
  char buf[48];
  for (double v : values) {
    std::snprintf(buf, sizeof(buf), "%.17g\n", v);
    out << buf;
  }
}

std::vector<double> load_values_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open values file: " + path.string());
  }
  std::vector<double> values;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    try {
      std::size_t pos = 0;
      const double v = std::stod(line, &pos);
      if (pos != line.size() || !std::isfinite(v)) {
        throw std::invalid_argument(line);
      }
      values.push_back(v);
    } catch (const std::exception&) {
      throw ParseError("bad value '" + line + "'", line_no);
    }
  }
  return values;
}

void write_ecdf_csv(std::span<const EcdfPoint> points, std::ostream& out) {
  out << "value,fraction\n";
  char buf[96];
  for (const EcdfPoint& p : points) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", p.value, p.fraction);
    out << buf;
  }
}

void write_heatmap_csv(const HeatmapGrid& map, std::ostream& out) {
  char buf[48];
  for (int r = 0; r < map.rows; ++r) {
    for (int c = 0; c < map.cols; ++c) {
      std::snprintf(buf, sizeof(buf), "%.17g", map.at(r, c));
      out << buf << (c + 1 == map.cols ? '\n' : ',');
    }
  }
}

void write_heatmap_pgm(const HeatmapGrid& map, std::ostream& out) {
  out << "P2\n" << map.cols << ' ' << map.rows << "\n255\n";
  for (int r = 0; r < map.rows; ++r) {
    for (int c = 0; c < map.cols; ++c) {
      out << static_cast<int>(std::lround(255.0 * map.at(r, c)))
          << (c + 1 == map.cols ? '\n' : ' ');
    }
  }
}

}  // namespace foveastream
