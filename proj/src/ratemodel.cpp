#include "foveastream/ratemodel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include "foveastream/errors.hpp"

namespace foveastream {

void validate(const RateModel& model) {
  if (!(model.ref_bits_per_mb > 0.0) || !std::isfinite(model.ref_bits_per_mb)) {
    throw DomainError("ref_bits_per_mb must be > 0, got " +
                      std::to_string(model.ref_bits_per_mb));
  }
  if (!(model.qp_halving_step > 0.0) || !std::isfinite(model.qp_halving_step)) {
    throw DomainError("qp_halving_step must be > 0, got " +
                      std::to_string(model.qp_halving_step));
  }
  if (model.weight_map) {
    const WeightMap& wm = *model.weight_map;
    if (wm.rows <= 0 || wm.cols <= 0 ||
        wm.values.size() != static_cast<std::size_t>(wm.rows) * wm.cols) {
      throw DomainError("weight map dimensions inconsistent with its values");
    }
    for (double w : wm.values) {
      if (!(w >= 0.0) || !std::isfinite(w)) {
        throw DomainError("weight map entries must be finite and >= 0");
      }
    }
  }
}

BitrateEstimate estimate_frame_bits(const OffsetMap& map,
                                    const RateModel& model) {
  validate(model);
  const GridSpec& grid = map.grid();
  const WeightMap* wm = model.weight_map ? &*model.weight_map : nullptr;
  if (wm && (wm->rows != grid.mb_rows() || wm->cols != grid.mb_cols())) {
    throw DomainError("weight map is " + std::to_string(wm->rows) + "x" +
                      std::to_string(wm->cols) + ", grid is " +
                      std::to_string(grid.mb_rows()) + "x" +
                      std::to_string(grid.mb_cols()));
  }

  BitrateEstimate est;
  est.rows = grid.mb_rows();
  est.cols = grid.mb_cols();
  est.per_mb_bits.resize(map.values().size());

  double frame_bits = 0.0;
  double baseline_bits = 0.0;
  const std::span<const double> offsets = map.values();
  for (std::size_t k = 0; k < offsets.size(); ++k) {
    const double weight = wm ? wm->values[k] : 1.0;
    const double full = weight * model.ref_bits_per_mb;
    const double bits = full * std::exp2(-offsets[k] / model.qp_halving_step);
    est.per_mb_bits[k] = bits;
    frame_bits += bits;
    baseline_bits += full;
  }
  est.frame_bits = frame_bits;
  est.savings_fraction = 1.0 - frame_bits / baseline_bits;
  return est;
}

std::vector<SweepRow> savings_sweep(const GridSpec& grid,
                                    std::span<const FoveationParams> params_list,
                                    PixelPoint gaze, const RateModel& model) {
  if (params_list.empty()) {
    throw DomainError("savings_sweep needs at least one parametrization");
  }
  std::vector<SweepRow> rows;
  rows.reserve(params_list.size());
  for (const FoveationParams& params : params_list) {
    const OffsetMap map = compute_offset_map(grid, params, gaze);
    const BitrateEstimate est = estimate_frame_bits(map, model);
    rows.push_back(SweepRow{params.qo_max, params.w_px, est.savings_fraction});
  }
  return rows;
}

double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) {
    throw DomainError("quantile of empty sample set");
  }
  if (!(p >= 0.0 && p <= 1.0)) {
    throw DomainError("quantile probability must be in [0, 1], got " +
                      std::to_string(p));
  }
  const double h = p * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) {
    return sorted.back();
  }
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

BitrateSummary summarize_bitrates(std::span<const double> samples) {
  if (samples.empty()) {
    throw DomainError("summarize_bitrates on empty input");
  }
  for (double v : samples) {
    if (!std::isfinite(v)) {
      throw DomainError("summarize_bitrates requires finite samples");
    }
  }
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());

  BitrateSummary s;
  s.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) /
           static_cast<double>(sorted.size());
  s.q1 = quantile_sorted(sorted, 0.25);
  s.median = quantile_sorted(sorted, 0.5);
  s.q3 = quantile_sorted(sorted, 0.75);
  return s;
}

void write_sweep_csv(std::span<const SweepRow> rows, std::ostream& out) {
  out << "qo_max,w_px,savings_fraction\n";
  char buf[96];
  for (const SweepRow& row : rows) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", row.qo_max, row.w_px,
                  row.savings_fraction);
    out << buf;
  }
}

WeightMap load_weight_map_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open weight map file: " + path.string());
  }
  WeightMap wm;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      continue;
    }
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t pos = 0;
        const double v = std::stod(cell, &pos);
        if (pos != cell.size()) {
          throw std::invalid_argument(cell);
        }
        row.push_back(v);
      } catch (const std::exception&) {
        throw ParseError("bad weight value '" + cell + "'", line_no);
      }
    }
    if (wm.cols == 0) {
      wm.cols = static_cast<int>(row.size());
    } else if (static_cast<int>(row.size()) != wm.cols) {
      throw ParseError("row has " + std::to_string(row.size()) +
                           " columns, expected " + std::to_string(wm.cols),
                       line_no);
    }
    wm.values.insert(wm.values.end(), row.begin(), row.end());
    ++wm.rows;
  }
  if (wm.rows == 0) {
    throw ParseError("weight map file is empty: " + path.string());
  }
  for (double w : wm.values) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw DomainError("weight map entries must be finite and >= 0");
    }
  }
  return wm;
}

}  // namespace foveastream
