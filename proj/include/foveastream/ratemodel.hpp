#ifndef FOVEASTREAM_RATEMODEL_HPP_
#define FOVEASTREAM_RATEMODEL_HPP_

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "foveastream/foveation.hpp"
#include "foveastream/grid.hpp"

namespace foveastream {

// Per-macroblock content weights, row-major rows x cols. All values >= 0.
struct WeightMap {
  int rows = 0;
  int cols = 0;
  std::vector<double> values;
};

// Exponential QP-rate model: a macroblock encoded with offset QO costs
//   weight * ref_bits_per_mb * 2^(-QO / qp_halving_step)
// bits. The 6-QP halving step is the usual AVC rate heuristic; absolute
// bit counts are a modeling scale, while savings fractions are exact
// ratios independent of ref_bits_per_mb.
struct RateModel {
  double ref_bits_per_mb = 50.0;
  double qp_halving_step = 6.0;
  std::optional<WeightMap> weight_map;  // default: uniform 1.0
};

// Throws DomainError when a field is out of range (weights are checked
// against a grid in estimate_frame_bits).
void validate(const RateModel& model);

struct BitrateEstimate {
  double frame_bits = 0.0;
  int rows = 0;
  int cols = 0;
  std::vector<double> per_mb_bits;  // row-major
  // 1 - frame_bits / baseline_bits, baseline taken at all-zero offsets.
  double savings_fraction = 0.0;
};

// Estimated bits for one frame under the model, plus the savings fraction
// versus the zero-offset baseline. Throws DomainError when the weight map
// does not match the map's grid.
BitrateEstimate estimate_frame_bits(const OffsetMap& map,
                                    const RateModel& model);

struct SweepRow {
  double qo_max = 0.0;
  double w_px = 0.0;
  double savings_fraction = 0.0;
};

// One savings estimate per parametrization, in input order.
std::vector<SweepRow> savings_sweep(const GridSpec& grid,
                                    std::span<const FoveationParams> params_list,
                                    PixelPoint gaze, const RateModel& model);

struct BitrateSummary {
  double mean = 0.0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
};

// Mean and quartiles of a sample set. Quartiles use linear interpolation
// between closest ranks (type 7). Throws DomainError on empty input.
BitrateSummary summarize_bitrates(std::span<const double> samples);

// Type-7 quantile of an ascending-sorted sample set, p in [0, 1].
// Throws DomainError on empty input or p outside [0, 1].
double quantile_sorted(std::span<const double> sorted, double p);

// CSV with header `qo_max,w_px,savings_fraction`.
void write_sweep_csv(std::span<const SweepRow> rows, std::ostream& out);

// Reads a rows x cols CSV of reals; dimensions are taken from the file.
// Throws ParseError on malformed content, DomainError on negative weights.
WeightMap load_weight_map_csv(const std::filesystem::path& path);

}  // namespace foveastream

#endif  // FOVEASTREAM_RATEMODEL_HPP_
