#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "edens/geometry.hpp"

namespace {

using namespace edens;
constexpr double kPi = std::numbers::pi;

TEST(Geometry, BallVolumeClosedForms) {
  EXPECT_DOUBLE_EQ(ball_volume(1, 2.5), 5.0);
  EXPECT_NEAR(ball_volume(2, 3.0), 9.0 * kPi, 1e-12);
  EXPECT_NEAR(ball_volume(3, 2.0), 32.0 * kPi / 3.0, 1e-12);
  EXPECT_NEAR(ball_surface_area(2, 3.0), 6.0 * kPi, 1e-12);
  EXPECT_NEAR(ball_surface_area(3, 2.0), 16.0 * kPi, 1e-12);
}

TEST(Geometry, RejectsBadInput) {
  EXPECT_THROW(ball_volume(2, 0.0), std::invalid_argument);
  EXPECT_THROW(ball_volume(4, 1.0), std::invalid_argument);
  EXPECT_THROW(make_ball(Point{0.0}, -1.0), std::invalid_argument);
  EXPECT_THROW(make_box(Point{0.0, 0.0}, Point{1.0, 0.0}), std::invalid_argument);
  EXPECT_THROW(check_same_dim(Point{0.0}, Point{0.0, 1.0}), std::invalid_argument);
}

TEST(Geometry, BallBoundaryIsAnnulus) {
  const Region ball = make_ball(Point{0.0, 0.0}, 10.0);
  EXPECT_NEAR(r_boundary_volume(ball, 1.0), kPi * (121.0 - 81.0), 1e-9);
  // r >= t: the whole enlarged ball.
  const Region small = make_ball(Point{0.0, 0.0}, 1.0);
  EXPECT_NEAR(r_boundary_volume(small, 2.0), 9.0 * kPi, 1e-9);
}

TEST(Geometry, SquareBoundaryHasRoundedCorners) {
  const Region sq = make_cube(2, 10.0);
  // Outer parallel body 100 + 40 + pi minus inner square 8^2.
  EXPECT_NEAR(r_boundary_volume(sq, 1.0), 76.0 + kPi, 1e-9);
}

// Monte Carlo: a point x lies in the r-boundary iff B_r(x) meets both the
// region and its complement, i.e. dist(x, region) <= r and dist(x, complement) <= r.
double box_signed_gap(const BoxRegion& b, const Point& x, bool& inside) {
  inside = true;
  double out2 = 0.0;
  double in_min = std::numeric_limits<double>::infinity();
  for (int i = 0; i < x.dim(); ++i) {
    const double below = b.lo[i] - x[i];
    const double above = x[i] - b.hi[i];
    const double gap = std::max({below, above, 0.0});
    if (gap > 0.0) inside = false;
    out2 += gap * gap;
    in_min = std::min(in_min, std::min(x[i] - b.lo[i], b.hi[i] - x[i]));
  }
  return inside ? in_min : std::sqrt(out2);
}

TEST(Geometry, BoundaryVolumeMatchesMonteCarlo) {
  std::mt19937_64 rng(7);
  for (int dim = 1; dim <= 3; ++dim) {
    Point lo = Point::zero(dim), hi = Point::zero(dim);
    for (int i = 0; i < dim; ++i) hi[i] = 2.0 + i;
    const BoxRegion box = make_box(lo, hi);
    const Ball ball = make_ball(Point::zero(dim), 2.0);
    for (double r : {0.3, 0.8}) {
      std::uniform_real_distribution<double> u(-3.0, 7.0);
      const int samples = 400000;
      int box_hits = 0, ball_hits = 0;
      for (int s = 0; s < samples; ++s) {
        Point x = Point::zero(dim);
        for (int i = 0; i < dim; ++i) x[i] = u(rng);
        bool inside = false;
        if (box_signed_gap(box, x, inside) <= r) ++box_hits;
        if (std::abs(x.norm() - ball.radius) <= r) ++ball_hits;
      }
      const double cube = std::pow(10.0, dim);
      EXPECT_NEAR(box_hits / double(samples) * cube, r_boundary_volume(Region{box}, r),
                  0.03 * r_boundary_volume(Region{box}, r))
          << "dim " << dim << " r " << r;
      EXPECT_NEAR(ball_hits / double(samples) * cube, r_boundary_volume(Region{ball}, r),
                  0.03 * r_boundary_volume(Region{ball}, r))
          << "dim " << dim << " r " << r;
    }
  }
}

TEST(Geometry, FolnerRatiosForGrowingRegions) {
  std::vector<Region> balls, squares;
  for (double n : {5.0, 10.0, 20.0, 40.0}) {
    balls.push_back(make_ball(Point{0.0, 0.0}, n));
    squares.push_back(make_cube(2, n));
  }
  const auto db = folner_diagnostics(balls, 1.0);
  const auto ds = folner_diagnostics(squares, 1.0);
  EXPECT_TRUE(db.consistent);
  EXPECT_TRUE(ds.consistent);
  ASSERT_EQ(ds.rows.size(), 4u);
  for (const auto& row : ds.rows) {
    const double n = std::sqrt(row.volume);
    EXPECT_NEAR(row.ratio, (8.0 * n + kPi - 4.0) / (n * n), 1e-12);
  }
  // Balls: 4n / n^2.
  EXPECT_NEAR(db.rows[0].ratio, 4.0 * 5.0 / 25.0, 1e-12);
}

TEST(Geometry, FolnerRejectsShrinkingAndSingletons) {
  std::vector<Region> shrinking{make_cube(2, 10.0), make_cube(2, 5.0)};
  EXPECT_FALSE(folner_diagnostics(shrinking, 1.0).consistent);
  std::vector<Region> single{make_cube(2, 10.0)};
  EXPECT_FALSE(folner_diagnostics(single, 1.0).consistent);
  EXPECT_THROW(folner_diagnostics({}, 1.0), std::invalid_argument);
}

TEST(Geometry, RegionBasics) {
  const Region box = make_box(Point{0.0, 0.0, 0.0}, Point{1.0, 2.0, 3.0});
  EXPECT_EQ(region_dim(box), 3);
  EXPECT_DOUBLE_EQ(region_volume(box), 6.0);
  EXPECT_DOUBLE_EQ(region_surface_area(box), 2.0 * (2.0 + 3.0 + 6.0));
  EXPECT_NEAR(distance(Point{0.0, 0.0}, Point{3.0, 4.0}), 5.0, 1e-15);
}

}  // namespace
