#include <gtest/gtest.h>

#include "edens/report_io.hpp"

namespace {

using namespace edens;

DensityReport sample() {
  DensityReport rep;
  rep.functional = "rho_tilde";
  rep.subject = "disk-lattice, with \"quotes\"";
  TableRow a;
  a.r = 2.5;
  a.radius = 5.0;
  a.estimate = 0.1963495408493621;
  a.error_bound = 1.0 / 3.0;
  a.flags = "argmax=(0.5;0.5),inf_at=3";
  TableRow b;
  b.radius = 40.0;
  b.estimate = 1e-300;
  rep.table.rows = {a, b};
  rep.table.extrapolated = 0.19635;
  rep.table.extrapolated_error = 0.0101;
  rep.table.trend = "flat";
  rep.table.flags = {{"non_increasing_in_R", true}, {"non_decreasing_in_r", false}};
  rep.config = {{"quadrature.cell", "0.05"}};
  rep.warnings = {"clipping activated"};
  return rep;
}

TEST(ReportIo, JsonRoundTrip) {
  const auto rep = sample();
  EXPECT_EQ(report_from_json(report_to_json(rep)), rep);
  const std::vector<DensityReport> many{rep, rep};
  EXPECT_EQ(reports_from_json(reports_to_json(many)), many);
}

TEST(ReportIo, MalformedJson) {
  EXPECT_THROW(report_from_json("{"), std::invalid_argument);
  EXPECT_THROW(report_from_json("{}"), std::invalid_argument);
  EXPECT_THROW(reports_from_json("{}"), std::invalid_argument);
}

TEST(ReportIo, CsvLayout) {
  const auto csv = report_to_csv(sample());
  EXPECT_EQ(csv,
            "functional,r,R_or_t,estimate,error_bound,flags\n"
            "rho_tilde,2.5,5,0.1963495408493621,0.33333333333333331,argmax=(0.5;0.5);inf_at=3\n"
            "rho_tilde,,40,1e-300,0,\n");
}

TEST(ReportIo, EstimatorOutputIsDeterministic) {
  const auto f = disk_lattice_field(2, 0.25, 1.0);
  QuadratureConfig q;
  q.rel_tol = 5e-3;
  const RadiusSchedule outer({2.0, 4.0}, ScheduleRole::outer_R);
  const auto a = rho_estimate(f, outer, default_search(f, 0.25), q);
  const auto b = rho_estimate(f, outer, default_search(f, 0.25), q);
  EXPECT_EQ(report_to_csv(a), report_to_csv(b));
  EXPECT_EQ(report_from_json(report_to_json(a)), a);
}

}  // namespace
