#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "foveastream/errors.hpp"
#include "foveastream/foveation.hpp"
#include "foveastream/grid.hpp"
#include "foveastream/ratemodel.hpp"

using namespace foveastream;

namespace {

const GridSpec kHd(1920, 1080, 16);
const PixelPoint kCenterBlockGaze{60.0 * 16.0, 33.0 * 16.0};

double savings_at(double qo_max, double w_px) {
  const FoveationParams p{qo_max, w_px, 28.0};
  const OffsetMap map = compute_offset_map(kHd, p, kCenterBlockGaze);
  const RateModel model;
  return estimate_frame_bits(map, model).savings_fraction;
}

}  // namespace

TEST_CASE("zero offsets give baseline bits and zero savings") {
  const OffsetMap map = compute_offset_map(kHd, {0.0, 240.0, 28.0},
                                           kCenterBlockGaze);
  const RateModel model;
  const BitrateEstimate est = estimate_frame_bits(map, model);
  CHECK(est.savings_fraction == 0.0);
  CHECK(est.frame_bits == 120.0 * 68.0 * model.ref_bits_per_mb);
  CHECK(est.rows == 68);
  CHECK(est.cols == 120);
  CHECK(est.per_mb_bits.size() == 120u * 68u);
}

TEST_CASE("uniform offset equal to the halving step halves the rate exactly") {
  // A constant offset of one halving step scales every term by 2^-1; the
  // savings fraction is then exactly 0.5 in floating point as well.
  OffsetMap map(kHd, MbIndex{0, 0},
                std::vector<double>(kHd.mb_count(), 6.0));
  RateModel model;
  model.qp_halving_step = 6.0;
  const BitrateEstimate est = estimate_frame_bits(map, model);
  CHECK(est.savings_fraction == 0.5);
  CHECK(est.frame_bits == 0.5 * kHd.mb_count() * model.ref_bits_per_mb);
}

TEST_CASE("frozen savings numbers for the HD reference setup") {
  // Golden values computed by a brute-force scalar sweep, fixed before the
  // library was written.
  CHECK(savings_at(10.0, 240.0) ==
        doctest::Approx(0.59937003072341044).epsilon(1e-12));
  CHECK(savings_at(10.0, 480.0) ==
        doctest::Approx(0.41904192779465543).epsilon(1e-12));
  CHECK(savings_at(10.0, 120.0) ==
        doctest::Approx(0.66323036200004593).epsilon(1e-12));
  CHECK(savings_at(2.0, 240.0) ==
        doctest::Approx(0.17334456630618666).epsilon(1e-12));
  CHECK(savings_at(5.0, 240.0) ==
        doctest::Approx(0.37466176439935572).epsilon(1e-12));
  CHECK(savings_at(15.0, 240.0) ==
        doctest::Approx(0.73567077544125892).epsilon(1e-12));
}

TEST_CASE("savings is scale-invariant in ref_bits_per_mb") {
  const OffsetMap map = compute_offset_map(kHd, {10.0, 240.0, 28.0},
                                           kCenterBlockGaze);
  RateModel a, b;
  a.ref_bits_per_mb = 50.0;
  b.ref_bits_per_mb = 9321.5;
  // The ratio cancels the reference bits exactly in real arithmetic; the
  // two evaluations may differ by accumulated rounding only.
  CHECK(estimate_frame_bits(map, a).savings_fraction ==
        doctest::Approx(estimate_frame_bits(map, b).savings_fraction)
            .epsilon(1e-13));
}

TEST_CASE("weight map scales per-block contributions") {
  const GridSpec g(64, 32, 16);  // 4x2 blocks
  OffsetMap map(g, MbIndex{0, 0}, std::vector<double>(8, 0.0));
  WeightMap weights{2, 4, std::vector<double>(8, 1.0)};
  weights.values[0] = 3.0;  // block (0,0)
  RateModel model;
  model.ref_bits_per_mb = 10.0;
  model.weight_map = weights;
  const BitrateEstimate est = estimate_frame_bits(map, model);
  // 7 blocks at weight 1 plus one at weight 3, zero offsets
  CHECK(est.frame_bits == doctest::Approx(10.0 * (7.0 + 3.0)));
  CHECK(est.per_mb_bits[0] == doctest::Approx(30.0));
  CHECK(est.savings_fraction == 0.0);
}

TEST_CASE("weight map dimension mismatch is an error") {
  const GridSpec g(64, 32, 16);
  OffsetMap map(g, MbIndex{0, 0}, std::vector<double>(8, 0.0));
  RateModel model;
  model.weight_map = WeightMap{3, 4, std::vector<double>(12, 1.0)};
  CHECK_THROWS_AS(estimate_frame_bits(map, model), DomainError);
}

TEST_CASE("model validation") {
  RateModel bad;
  bad.ref_bits_per_mb = 0.0;
  CHECK_THROWS_AS(validate(bad), DomainError);
  bad.ref_bits_per_mb = 50.0;
  bad.qp_halving_step = 0.0;
  CHECK_THROWS_AS(validate(bad), DomainError);
  bad.qp_halving_step = -2.0;
  CHECK_THROWS_AS(validate(bad), DomainError);
}

TEST_CASE("savings_sweep preserves input order and matches single estimates") {
  const std::vector<FoveationParams> list = {
      {15.0, 240.0, 28.0}, {2.0, 240.0, 28.0}, {10.0, 480.0, 28.0}};
  const RateModel model;
  const auto rows = savings_sweep(kHd, list, kCenterBlockGaze, model);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].qo_max == 15.0);
  CHECK(rows[1].qo_max == 2.0);
  CHECK(rows[2].w_px == 480.0);
  for (std::size_t k = 0; k < list.size(); ++k) {
    const OffsetMap map = compute_offset_map(kHd, list[k], kCenterBlockGaze);
    CHECK(rows[k].savings_fraction ==
          estimate_frame_bits(map, model).savings_fraction);
  }
  CHECK_THROWS_AS(savings_sweep(kHd, {}, kCenterBlockGaze, model), DomainError);
}

TEST_CASE("sweep CSV header and row count") {
  const std::vector<FoveationParams> list = {{0.0, 240.0, 28.0},
                                             {10.0, 240.0, 28.0}};
  const auto rows = savings_sweep(kHd, list, kCenterBlockGaze, RateModel{});
  std::ostringstream out;
  write_sweep_csv(rows, out);
  std::istringstream in(out.str());
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "qo_max,w_px,savings_fraction");
  int n = 0;
  while (std::getline(in, line)) ++n;
  CHECK(n == 2);
}

TEST_CASE("quantile_sorted agrees with a brute-force reference") {
  // Reference: sort, then linear interpolation at h = p*(n-1).
  const std::vector<double> v = {1.0, 2.0, 3.0, 4.0};
  CHECK(quantile_sorted(v, 0.0) == 1.0);
  CHECK(quantile_sorted(v, 1.0) == 4.0);
  CHECK(quantile_sorted(v, 0.5) == doctest::Approx(2.5));
  CHECK(quantile_sorted(v, 0.25) == doctest::Approx(1.75));

  const std::vector<double> single = {7.0};
  CHECK(quantile_sorted(single, 0.0) == 7.0);
  CHECK(quantile_sorted(single, 0.99) == 7.0);

  CHECK_THROWS_AS(quantile_sorted({}, 0.5), DomainError);
  CHECK_THROWS_AS(quantile_sorted(v, -0.1), DomainError);
  CHECK_THROWS_AS(quantile_sorted(v, 1.1), DomainError);
}

TEST_CASE("summarize_bitrates computes mean and quartiles") {
  const std::vector<double> bits = {10.0, 20.0, 30.0, 40.0, 50.0};
  const BitrateSummary s = summarize_bitrates(bits);
  CHECK(s.mean == doctest::Approx(30.0));
  CHECK(s.median == 30.0);
  CHECK(s.q1 == doctest::Approx(20.0));
  CHECK(s.q3 == doctest::Approx(40.0));
  CHECK_THROWS_AS(summarize_bitrates({}), DomainError);
}

TEST_CASE("weight map CSV loader") {
  std::istringstream in("1.0,2.0\n3.0,4.5\n");
  std::ostringstream tmp;
  // loader reads from a path; exercise via a temp file
  const char* path = "/tmp/foveastream_test_weights.csv";
  {
    std::ofstream f(path);
    f << in.str();
  }
  const WeightMap w = load_weight_map_csv(path);
  CHECK(w.rows == 2);
  CHECK(w.cols == 2);
  CHECK(w.values == std::vector<double>{1.0, 2.0, 3.0, 4.5});
}
