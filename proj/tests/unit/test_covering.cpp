#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "edens/covering.hpp"
#include "edens/error.hpp"

namespace {

using namespace edens;

BallFamily three_balls() {
  return BallFamily(2, {make_ball(Point{0.0, 0.0}, 2.0), make_ball(Point{1.0, 0.0}, 1.0),
                        make_ball(Point{5.0, 0.0}, 1.0)});
}

BallFamily random_family(std::mt19937_64& rng, int dim, int count) {
  std::uniform_real_distribution<double> pos(0.0, 30.0);
  std::uniform_real_distribution<double> rad(0.1, 5.0);
  std::vector<Ball> balls;
  for (int k = 0; k < count; ++k) {
    Point c = Point::zero(dim);
    for (int i = 0; i < dim; ++i) c[i] = pos(rng);
    balls.push_back(make_ball(c, rad(rng)));
  }
  return BallFamily(dim, std::move(balls));
}

TEST(Vitali, ThreeBallExample) {
  const auto fam = three_balls();
  const auto sel = vitali_select(fam);
  EXPECT_EQ(sel, (std::vector<std::size_t>{1, 3}));
  const auto rep = verify_cover(fam, sel);
  EXPECT_TRUE(rep.ok());
  EXPECT_EQ(rep.covered_by[1], 1u);  // ball 2 sits inside 3 B_1
}

TEST(Vitali, SingleBall) {
  const BallFamily fam(3, {make_ball(Point{1.0, 2.0, 3.0}, 0.5)});
  EXPECT_EQ(vitali_select(fam), (std::vector<std::size_t>{1}));
}

TEST(Vitali, TiesGoToLowerIndex) {
  const BallFamily fam(1, {make_ball(Point{0.0}, 1.0), make_ball(Point{1.5}, 1.0),
                           make_ball(Point{3.0}, 1.0)});
  EXPECT_EQ(vitali_select(fam), (std::vector<std::size_t>{1, 3}));
}

TEST(Vitali, TangentBallsAreNotDisjoint) {
  // Closed balls touching at one point intersect.
  EXPECT_FALSE(balls_disjoint(make_ball(Point{0.0}, 1.0), make_ball(Point{2.0}, 1.0)));
  EXPECT_TRUE(balls_disjoint(make_ball(Point{0.0}, 1.0), make_ball(Point{2.1}, 1.0)));
}

TEST(Vitali, VerifyReportsViolations) {
  const auto fam = three_balls();
  const auto overlap = verify_cover(fam, {1, 2});
  ASSERT_FALSE(overlap.ok());
  EXPECT_EQ(overlap.violations.front().kind, CoverViolation::Kind::overlap);
  const auto uncovered = verify_cover(fam, {3});
  ASSERT_FALSE(uncovered.ok());
  EXPECT_EQ(uncovered.violations.front().kind, CoverViolation::Kind::uncovered);
  EXPECT_EQ(uncovered.violations.front().first, 1u);
  const auto bad = verify_cover(fam, {4});
  ASSERT_FALSE(bad.ok());
  EXPECT_EQ(bad.violations.front().kind, CoverViolation::Kind::bad_index);
}

TEST(Vitali, RandomFamiliesAreCertified) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int dim = 1 + trial % 3;
    const auto fam = random_family(rng, dim, 1 + trial % 60);
    const auto sel = vitali_select(fam);
    ASSERT_TRUE(verify_cover(fam, sel).ok()) << "trial " << trial;
    // Brute force: every unselected ball meets a selected ball at least as large.
    std::vector<bool> chosen(fam.size() + 1, false);
    for (auto i : sel) chosen[i] = true;
    for (std::size_t j = 1; j <= fam.size(); ++j) {
      if (chosen[j]) continue;
      bool blocked = false;
      for (auto i : sel) {
        const double d = distance(fam[i].center, fam[j].center);
        if (d <= fam[i].radius + fam[j].radius && fam[i].radius >= fam[j].radius) blocked = true;
      }
      EXPECT_TRUE(blocked) << "trial " << trial << " ball " << j;
    }
  }
}

TEST(Vitali, SelectedVolumeBoundsUnion) {
  // |union| <= 3^D sum |selected|, checked with a Monte Carlo union estimate.
  std::mt19937_64 rng(5);
  for (int dim = 1; dim <= 3; ++dim) {
    const auto fam = random_family(rng, dim, 40);
    const auto sel = vitali_select(fam);
    double selected = 0.0;
    for (auto i : sel) selected += ball_volume(dim, fam[i].radius);
    std::uniform_real_distribution<double> u(-5.0, 35.0);
    const int samples = 100000;
    int hits = 0;
    for (int s = 0; s < samples; ++s) {
      Point x = Point::zero(dim);
      for (int i = 0; i < dim; ++i) x[i] = u(rng);
      for (const auto& b : fam.balls()) {
        if (distance(x, b.center) <= b.radius) {
          ++hits;
          break;
        }
      }
    }
    const double union_volume = hits / double(samples) * std::pow(40.0, dim);
    EXPECT_LE(union_volume, std::pow(3.0, dim) * selected * 1.05) << "dim " << dim;
  }
}

TEST(Vitali, ParsesCsv) {
  const auto fam = parse_ball_family_csv("index,x,y,r\n# comment\n1,0,0,2\n2,1,0,1\n3,5,0,1\n");
  EXPECT_EQ(fam.dim(), 2);
  EXPECT_EQ(fam.size(), 3u);
  EXPECT_EQ(fam[3].center, (Point{5.0, 0.0}));
  EXPECT_THROW(parse_ball_family_csv("1,0,0,2\n3,1,0,1\n"), ConfigError);
  EXPECT_THROW(parse_ball_family_csv("1,0,0,-2\n"), ConfigError);
  EXPECT_THROW(parse_ball_family_csv("1,0,0,2\n2,1,1\n"), ConfigError);
  EXPECT_THROW(parse_ball_family_csv(""), ConfigError);
}

}  // namespace
