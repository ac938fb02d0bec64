#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "edens/error.hpp"
#include "edens/field.hpp"

namespace {

using namespace edens;
constexpr double kPi = std::numbers::pi;

TEST(Field, ConstantMassIsScaledVolume) {
  QuadratureConfig q;
  q.rel_tol = 5e-3;
  for (int dim = 1; dim <= 3; ++dim) {
    const auto f = constant_field(dim, 0.5);
    const auto m = ball_mass(f, Point::zero(dim), 3.0, q);
    EXPECT_NEAR(m.value, 0.5 * ball_volume(dim, 3.0), 1e-9 * ball_volume(dim, 3.0)) << dim;
    EXPECT_LE(m.error, q.tolerance(dim, 3.0));
  }
}

TEST(Field, BallIndicatorMass) {
  const auto f = ball_indicator_field(make_ball(Point{0.0, 0.0}, 1.0));
  QuadratureConfig q;
  q.abs_tol = 1e-4;
  EXPECT_NEAR(ball_mass(f, Point{0.0, 0.0}, 2.0, q).value, kPi, 2e-4);
  // Concentric: exact up to the shell containing the edge.
  EXPECT_NEAR(ball_mass(f, Point{0.0, 0.0}, 0.5, q).value, kPi * 0.25, 1e-9);
}

TEST(Field, HalfSpaceHalvesEveryCentredBall) {
  QuadratureConfig q;
  q.rel_tol = 5e-3;
  for (int dim = 1; dim <= 3; ++dim) {
    const auto f = half_space_field(dim, dim - 1);
    const auto m = ball_mass(f, Point::zero(dim), 2.0, q);
    EXPECT_NEAR(m.value, 0.5 * ball_volume(dim, 2.0), 1e-2 * ball_volume(dim, 2.0)) << dim;
  }
}

TEST(Field, DiskLatticeAverageApproachesAreaFraction) {
  const auto f = disk_lattice_field(2, 0.25, 1.0);
  QuadratureConfig q;
  q.rel_tol = 2e-3;
  const double t = 20.0;
  const double avg = ball_mass(f, Point{0.3, 0.1}, t, q).value / ball_volume(2, t);
  EXPECT_NEAR(avg, kPi / 16.0, 0.01);
  EXPECT_NEAR(f(Point{3.0, -2.0}), 1.0, 0.0);
  EXPECT_NEAR(f(Point{3.5, -2.5}), 0.0, 0.0);
}

TEST(Field, StripeAndClusterFields) {
  const auto s = stripe_field(2.0, 0.25);
  EXPECT_EQ(s(Point{0.2, 7.0}), 1.0);
  EXPECT_EQ(s(Point{0.6, 7.0}), 0.0);
  EXPECT_EQ(s(Point{-1.8, 0.0}), 1.0);
  const auto c = sparse_cluster_field(3);
  EXPECT_EQ(c(Point{4.0, 1.9}), 1.0);   // inside cluster 2 (centre 4, radius 2)
  EXPECT_EQ(c(Point{4.0, 2.5}), 0.0);   // outside every cluster
  EXPECT_EQ(c(Point{9.0, -3.0}), 1.0);  // boundary of cluster 3
}

TEST(Field, TranslationMovesMass) {
  const auto f = ball_indicator_field(make_ball(Point{0.0, 0.0}, 1.0));
  const Point a{2.0, -1.0};
  const auto g = translate(f, a);
  // (a.phi)(x) = phi(a + x): the disc now sits at -a.
  EXPECT_EQ(g(Point{-2.0, 1.0}), 1.0);
  QuadratureConfig q;
  q.abs_tol = 1e-4;
  const auto mg = ball_mass(g, Point{-2.0, 1.0}, 1.5, q);
  const auto mf = ball_mass(f, Point{0.0, 0.0}, 1.5, q);
  EXPECT_NEAR(mg.value, mf.value, 1e-12);
  EXPECT_EQ(translate(g, -a)(Point{0.0, 0.0}), 1.0);
  EXPECT_THROW(translate(f, Point{1.0}), std::invalid_argument);
}

TEST(Field, ProfileIsMonotoneAndConsistent) {
  const auto f = disk_lattice_field(2, 0.25, 1.0);
  QuadratureConfig q;
  q.rel_tol = 5e-3;
  const std::vector<double> probes{1.0, 2.0, 4.0};
  const auto prof = ball_mass_profile(f, Point{0.1, 0.2}, 8.0, probes, q);
  double prev = 0.0;
  for (double t = 0.05; t <= 8.0; t += 0.05) {
    EXPECT_GE(prof.mass(t), prev - 1e-12);
    prev = prof.mass(t);
  }
  EXPECT_THROW(prof.mass(9.0), std::out_of_range);
  EXPECT_THROW(prof.mass(0.0), std::invalid_argument);
}

TEST(Field, NonConvergenceIsReported) {
  const auto f = disk_lattice_field(2, 0.25, 1.0);
  QuadratureConfig q;
  q.max_levels = 1;
  q.abs_tol = 1e-12;
  EXPECT_THROW(ball_mass(f, Point{0.0, 0.0}, 5.0, q), ConvergenceError);
}

TEST(Field, QuadratureValidation) {
  QuadratureConfig q;
  q.cell = 0.0;
  EXPECT_THROW(q.validate(), std::invalid_argument);
  q = {};
  q.max_levels = 0;
  EXPECT_THROW(q.validate(), std::invalid_argument);
  q = {};
  q.abs_tol = 0.0;
  EXPECT_THROW(q.validate(), std::invalid_argument);
}

TEST(Field, BoxMass) {
  QuadratureConfig q;
  const auto f = constant_field(3, 0.25);
  const auto m = box_mass(f, make_box(Point{0.0, 0.0, 0.0}, Point{1.0, 2.0, 3.0}), q);
  EXPECT_NEAR(m.value, 1.5, 1e-12);
  const auto half = half_space_field(2, 0);
  EXPECT_NEAR(box_mass(half, make_box(Point{-1.0, 0.0}, Point{3.0, 1.0}), q).value, 3.0, 1e-9);
}

TEST(Field, GridCsv) {
  const auto raster = parse_grid_csv("D,nx,ny,x0,y0,dx,dy\n2,2,2,0,0,1,1\n0,1\n0.5,0.25\n");
  EXPECT_EQ(raster.nx, 2);
  const auto f = grid_field(raster);
  EXPECT_EQ(f(Point{1.5, 0.5}), 1.0);
  EXPECT_EQ(f(Point{0.5, 1.5}), 0.5);
  EXPECT_EQ(f(Point{5.0, 5.0}), 0.0);
  EXPECT_THROW(grid_field(parse_grid_csv("2,2,2,0,0,1,1\n0,1\n0.5\n")), ConfigError);
  EXPECT_THROW(grid_field(parse_grid_csv("2,1,1,0,0,1,1\n1.5\n")), ConfigError);
  EXPECT_THROW(parse_grid_csv("3,1,1,0,0,1,1\n1\n"), ConfigError);
}

TEST(Field, DefaultSearchNeedsPeriod) {
  EXPECT_THROW(default_search(half_space_field(2, 0)), std::invalid_argument);
  const auto s = default_search(disk_lattice_field(2, 0.25, 1.0), 0.25);
  EXPECT_EQ(s.grid().size(), 25u);
}

TEST(Field, PatternSearchLeavesTheGrid) {
  TranslateSearchConfig s{Point{-1.0, -1.0}, Point{1.0, 1.0}, 0.5, 6};
  const Point target{0.33, -0.41};
  const auto out = maximize_over_translates(s, [&](const Point& a) {
    return MassEstimate{-std::pow(distance(a, target), 2), 0.0};
  });
  EXPECT_LT(distance(out.argmax, target), 0.02);
  EXPECT_GT(out.evaluations, 25);
}

TEST(Field, SupOverTranslatesOfDisc) {
  const auto f = ball_indicator_field(make_ball(Point{0.0, 0.0}, 1.0));
  QuadratureConfig q;
  q.abs_tol = 1e-4;
  const auto sup = sup_translate_ball_mass(f, 1.0, box_search(Point{0.0, 0.0}, 0.5, 0.1), q);
  EXPECT_NEAR(sup.value, kPi, 1e-3);
  EXPECT_LT(sup.argmax.norm(), 1e-9);
  EXPECT_NEAR(sup.error_bound, 2.0 * 2.0 * kPi * 0.1, 1e-12);
}

TEST(Field, ProfileCacheMemoizes) {
  const auto f = constant_field(2, 1.0);
  ProfileCache cache(f, 2.0, {1.0}, QuadratureConfig{});
  const std::vector<Point> centers{Point{0.0, 0.0}, Point{1.0, 0.0}};
  cache.prefetch(centers);
  EXPECT_EQ(cache.size(), 2u);
  EXPECT_NEAR(cache.at(Point{1.0, 0.0}).mass(2.0), 4.0 * kPi, 1e-9);
  EXPECT_EQ(cache.size(), 2u);
}

}  // namespace
