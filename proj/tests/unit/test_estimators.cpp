#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "edens/estimators.hpp"

namespace {

using namespace edens;
constexpr double kPi = std::numbers::pi;

TEST(Schedule, Validation) {
  EXPECT_THROW(RadiusSchedule({}, ScheduleRole::outer_R), std::invalid_argument);
  EXPECT_THROW(RadiusSchedule({2.0, 1.0}, ScheduleRole::outer_R), std::invalid_argument);
  EXPECT_THROW(RadiusSchedule({0.0, 1.0}, ScheduleRole::outer_R), std::invalid_argument);
  EXPECT_THROW(RadiusSchedule({0.5, 2.0}, ScheduleRole::nsa_r), std::invalid_argument);
  const auto g = RadiusSchedule::geometric(1.0, 16.0, 5, ScheduleRole::nsa_r);
  EXPECT_EQ(g.radii(), (std::vector<double>{1.0, 2.0, 4.0, 8.0, 16.0}));
}

TEST(Schedule, GeometricTGrid) {
  const auto grid = geometric_t_grid(2.5, 10.0, 16);
  EXPECT_EQ(grid.front(), 2.5);
  EXPECT_EQ(grid.back(), 10.0);
  EXPECT_GE(grid.size(), 32u);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    EXPECT_GT(grid[i], grid[i - 1]);
    EXPECT_LE(grid[i] / grid[i - 1], std::exp2(1.0 / 16.0) + 1e-12);
  }
  EXPECT_EQ(geometric_t_grid(3.0, 3.0).size(), 1u);
}

TEST(Rho, ConstantField) {
  const auto f = constant_field(2, 0.5);
  const RadiusSchedule outer({1.0, 2.0, 4.0}, ScheduleRole::outer_R);
  const auto rep = rho_estimate(f, outer, default_search(f, 0.5), QuadratureConfig{});
  ASSERT_EQ(rep.table.rows.size(), 3u);
  for (const auto& row : rep.table.rows) EXPECT_NEAR(row.estimate, 0.5, 1e-6);
  EXPECT_NEAR(rep.table.extrapolated, 0.5, 1e-6);
  EXPECT_TRUE(rep.table.flags.at("non_increasing_in_R"));
  EXPECT_EQ(rep.functional, "rho");
}

TEST(Rho, RhoTildeBelowRhoAndMonotone) {
  const auto f = disk_lattice_field(2, 0.25, 1.0);
  QuadratureConfig q;
  q.rel_tol = 5e-3;
  const RadiusSchedule outer({3.0, 6.0}, ScheduleRole::outer_R);
  const RadiusSchedule inner({1.5, 3.0}, ScheduleRole::inner_r);
  const auto pair = rho_and_rho_tilde(f, inner, outer, default_search(f, 0.25), q);
  for (const auto& t : pair.rho_tilde.table.rows) {
    for (const auto& r : pair.rho.table.rows) {
      if (r.radius == t.radius) {
        EXPECT_LE(t.estimate, r.estimate + t.error_bound + r.error_bound);
      }
    }
    ASSERT_TRUE(t.r.has_value());
    EXPECT_LT(*t.r, t.radius);
  }
  EXPECT_TRUE(pair.rho_tilde.table.flags.at("non_increasing_in_R"));
  EXPECT_TRUE(pair.rho_tilde.table.flags.at("non_decreasing_in_r"));
  // Headline is the entry at the largest r and R.
  EXPECT_EQ(*pair.rho_tilde.table.rows.back().r, 3.0);
  EXPECT_EQ(pair.rho_tilde.table.rows.back().radius, 6.0);
  EXPECT_THROW(rho_tilde_estimate(f, RadiusSchedule({6.0}, ScheduleRole::inner_r), outer,
                                  default_search(f, 0.25), q),
               std::invalid_argument);
}

TEST(Rho, TranslateNeverExceedsOriginal) {
  // rho(a.f) <= rho(f): both searched over the same translate box.
  const auto f = curve_energy_field(MeromorphicCurve::identity());
  const auto g = translate(f, Point{0.3, -0.2});
  QuadratureConfig q;
  q.cell = 0.1;
  q.abs_tol = 1e-3;
  const RadiusSchedule outer({1.0, 2.0, 4.0}, ScheduleRole::outer_R);
  const auto search = box_search(Point{0.0, 0.0}, 1.0, 0.25);
  const auto rf = rho_estimate(f, outer, search, q);
  const auto rg = rho_estimate(g, outer, search, q);
  for (std::size_t i = 0; i < outer.size(); ++i) {
    EXPECT_LE(rg.table.rows[i].estimate,
              rf.table.rows[i].estimate + rf.table.rows[i].error_bound + rg.table.rows[i].error_bound);
  }
}

TEST(Rho, RichardsonIsOptIn) {
  const auto f = ball_indicator_field(make_ball(Point{0.0, 0.0}, 1.0));
  const RadiusSchedule outer({2.0, 4.0}, ScheduleRole::outer_R);
  QuadratureConfig q;
  q.rel_tol = 1e-3;
  const auto search = box_search(Point{0.0, 0.0}, 0.2, 0.2);
  const auto plain = rho_estimate(f, outer, search, q);
  EXPECT_EQ(plain.table.extrapolated, plain.table.rows.back().estimate);
  const auto rich = rho_estimate(f, outer, search, q, EstimatorOptions{true});
  const auto& r = rich.table.rows;
  EXPECT_NEAR(rich.table.extrapolated,
              (4.0 * r[1].estimate - 2.0 * r[0].estimate) / 2.0, 1e-12);
}

TEST(Nsa, IdentityMatchesClosedForm) {
  const auto energy = curve_energy_field(MeromorphicCurve::identity());
  QuadratureConfig q;
  q.cell = 0.05;
  q.abs_tol = 1e-4;
  for (double r : {1.5, 3.0}) {
    const auto t = nsa_characteristic(energy, r, q);
    EXPECT_NEAR(t.value, 0.5 * kPi * std::log((1.0 + r * r) / 2.0), 1e-3);
  }
  EXPECT_EQ(nsa_characteristic(energy, 1.0, q).value, 0.0);
  EXPECT_THROW(nsa_characteristic(energy, 0.5, q), std::invalid_argument);
  EXPECT_THROW(nsa_characteristic(constant_field(1, 0.5), 2.0, q), std::invalid_argument);
}

TEST(Nsa, ConstantCurveAndWindow) {
  const auto energy = curve_energy_field(MeromorphicCurve::constant({2.0, 0.0}));
  const RadiusSchedule s({1.0, 2.0, 4.0, 8.0}, ScheduleRole::nsa_r);
  const auto nsa = rho_nsa_estimate(energy, s, QuadratureConfig{});
  EXPECT_EQ(nsa.upper.table.extrapolated, 0.0);
  EXPECT_EQ(nsa.lower.table.extrapolated, 0.0);

  const auto z = curve_energy_field(MeromorphicCurve::identity());
  QuadratureConfig q;
  q.cell = 0.05;
  q.abs_tol = 1e-4;
  const auto zn = rho_nsa_estimate(z, s, q);
  // Rows decrease, so the trailing-half max is row 2 and the min is row 3.
  EXPECT_EQ(zn.upper.table.extrapolated, zn.upper.table.rows[2].estimate);
  EXPECT_EQ(zn.lower.table.extrapolated, zn.lower.table.rows[3].estimate);
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_LE(zn.characteristic[i].value, kPi * s.radii()[i] * s.radii()[i] / 2.0);
  }
}

TEST(Family, SingleMemberIsCentredAverage) {
  const auto f = ball_indicator_field(make_ball(Point{0.0, 0.0}, 1.0));
  QuadratureConfig q;
  q.abs_tol = 1e-5;
  const std::vector<DensityField> fam{f, translate(f, Point{5.0, 0.0})};
  const RadiusSchedule outer({2.0}, ScheduleRole::outer_R);
  const auto rep = rho_family_estimate(fam, outer, q);
  EXPECT_NEAR(rep.table.extrapolated, kPi / (4.0 * kPi), 1e-4);
  EXPECT_EQ(rep.table.rows[0].flags, "member=0");
  EXPECT_THROW(rho_family_estimate({}, outer, q), std::invalid_argument);
}

TEST(OrnsteinWeiss, RejectsNonFolnerSequences) {
  const auto f = constant_field(2, 1.0);
  const auto search = default_search(f, 0.5);
  std::vector<Region> bad{make_cube(2, 10.0), make_cube(2, 5.0)};
  EXPECT_THROW(ow_average(f, false, bad, search, QuadratureConfig{}), std::invalid_argument);
  std::vector<Region> good{make_cube(2, 2.0), make_cube(2, 4.0)};
  const auto rep = ow_average(f, true, good, search, QuadratureConfig{});
  EXPECT_NEAR(rep.table.extrapolated, 1.0, 1e-12);
}

TEST(Orbit, ConstantAndIdentity) {
  QuadratureConfig q;
  q.cell = 0.05;
  q.abs_tol = 1e-5;
  const RadiusSchedule inner({0.5, 1.0, 2.0, 4.0}, ScheduleRole::inner_r);
  const std::vector<Complex> origin{{0.0, 0.0}};
  const auto flat = translate_orbit_experiment(MeromorphicCurve::constant({1.0, 0.0}), origin,
                                               inner, 4.0, q);
  for (const auto& row : flat.centers[0].profile) EXPECT_EQ(row.estimate, 0.0);

  const auto id = translate_orbit_experiment(MeromorphicCurve::identity(), origin, inner, 4.0, q);
  const auto& prof = id.centers[0].profile;
  for (std::size_t i = 0; i < prof.size(); ++i) {
    const double t = prof[i].radius;
    EXPECT_NEAR(prof[i].estimate, 1.0 / (1.0 + t * t), 1e-4);
    if (i > 0) {
      EXPECT_LT(prof[i].estimate, prof[i - 1].estimate);
    }
  }
  EXPECT_NEAR(id.best_inf, 1.0 / 17.0, 1e-4);
  const auto reports = id.to_reports();
  ASSERT_EQ(reports.size(), 2u);
  EXPECT_EQ(reports[0].functional, "orbit_profile");
  EXPECT_EQ(reports[1].functional, "orbit_inf");
}

TEST(Tables, MonotonicityWithinErrors) {
  std::vector<TableRow> rows(3);
  rows[0].estimate = 1.0;
  rows[1].estimate = 1.05;
  rows[2].estimate = 0.9;
  EXPECT_FALSE(non_increasing_within(rows));
  rows[1].error_bound = 0.03;
  rows[0].error_bound = 0.03;
  EXPECT_TRUE(non_increasing_within(rows));
  EXPECT_FALSE(non_decreasing_within(rows));
}

}  // namespace
