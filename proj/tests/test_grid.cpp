#include <doctest.h>

#include <cmath>

#include "foveastream/errors.hpp"
#include "foveastream/grid.hpp"

using namespace foveastream;

TEST_CASE("grid dimensions use ceiling division") {
  const GridSpec hd(1920, 1080, 16);
  CHECK(hd.mb_cols() == 120);
  CHECK(hd.mb_rows() == 68);  // 1080/16 = 67.5 rounds up

  const GridSpec odd(100, 100, 16);
  CHECK(odd.mb_cols() == 7);
  CHECK(odd.mb_rows() == 7);

  const GridSpec exact(64, 32, 16);
  CHECK(exact.mb_cols() == 4);
  CHECK(exact.mb_rows() == 2);
}

TEST_CASE("grid rejects non-positive dimensions") {
  CHECK_THROWS_AS(GridSpec(0, 1080, 16), DomainError);
  CHECK_THROWS_AS(GridSpec(1920, -1, 16), DomainError);
  CHECK_THROWS_AS(GridSpec(1920, 1080, 0), DomainError);
}

TEST_CASE("mb_index_of floor division, oracle scan") {
  const GridSpec g(100, 80, 16);
  // Exhaustive integer-pixel scan against a from-scratch floor computation.
  for (int y = 0; y < 80; ++y) {
    for (int x = 0; x < 100; ++x) {
      const MbIndex idx = mb_index_of(g, PixelPoint{double(x), double(y)});
      CHECK(idx.i == x / 16);
      CHECK(idx.j == y / 16);
    }
  }
}

TEST_CASE("mb_index_of boundary pixels") {
  const GridSpec g(1920, 1080, 16);
  CHECK(mb_index_of(g, {0.0, 0.0}).i == 0);
  CHECK(mb_index_of(g, {15.999, 15.999}).i == 0);
  CHECK(mb_index_of(g, {16.0, 16.0}).i == 1);
  CHECK(mb_index_of(g, {1919.0, 1079.0}).i == 119);
  CHECK(mb_index_of(g, {1919.0, 1079.0}).j == 67);
}

TEST_CASE("mb_index_of rejects out-of-frame points") {
  const GridSpec g(1920, 1080, 16);
  CHECK_THROWS_AS(mb_index_of(g, {-0.001, 5.0}), DomainError);
  CHECK_THROWS_AS(mb_index_of(g, {1920.0, 5.0}), DomainError);
  CHECK_THROWS_AS(mb_index_of(g, {5.0, 1080.0}), DomainError);
}

TEST_CASE("clamp_to_frame pulls points into the frame") {
  const GridSpec g(1920, 1080, 16);
  const PixelPoint inside = clamp_to_frame(g, {500.0, 500.0});
  CHECK(inside.x_px == 500.0);
  CHECK(inside.y_px == 500.0);

  const PixelPoint low = clamp_to_frame(g, {-10.0, -3.0});
  CHECK(low.x_px == 0.0);
  CHECK(low.y_px == 0.0);

  const PixelPoint high = clamp_to_frame(g, {5000.0, 2000.0});
  CHECK(high.x_px == 1919.0);
  CHECK(high.y_px == 1079.0);

  CHECK_THROWS_AS(clamp_to_frame(g, {std::nan(""), 0.0}), DomainError);
}

TEST_CASE("clamped points always index into the grid") {
  const GridSpec g(1920, 1080, 16);
  const PixelPoint corner = clamp_to_frame(g, {1e9, 1e9});
  const MbIndex idx = mb_index_of(g, corner);
  CHECK(idx.i == g.mb_cols() - 1);
  CHECK(idx.j == g.mb_rows() - 1);
}

TEST_CASE("distance is euclidean") {
  CHECK(distance({0.0, 0.0}, {3.0, 4.0}) == doctest::Approx(5.0));
  CHECK(distance({1.0, 1.0}, {1.0, 1.0}) == 0.0);
  // hypot path resists overflow
  CHECK(std::isfinite(distance({0.0, 0.0}, {1e200, 1e200})));
}
