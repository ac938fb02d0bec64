#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "edens/curves.hpp"
#include "edens/error.hpp"

namespace {

using namespace edens;

double chordal(Complex a, Complex b) {
  return std::abs(a - b) / std::sqrt((1.0 + std::norm(a)) * (1.0 + std::norm(b)));
}

RationalCurve sample_rational() {
  // (z^2 + 1) / (z - 3)
  return RationalCurve(Polynomial({{1.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}}),
                       Polynomial({{-3.0, 0.0}, {1.0, 0.0}}));
}

TEST(Polynomial, EvaluateAndDifferentiate) {
  const Polynomial p({{1.0, 0.0}, {2.0, 0.0}, {3.0, 0.0}});
  EXPECT_EQ(p({2.0, 0.0}), Complex(17.0, 0.0));
  EXPECT_EQ(p.derivative()({2.0, 0.0}), Complex(14.0, 0.0));
  EXPECT_EQ(Polynomial({{1.0, 0.0}, {0.0, 0.0}}).degree(), 0);
  EXPECT_TRUE(Polynomial(std::vector<Complex>{Complex{0.0, 0.0}}).is_zero());
}

TEST(Polynomial, ResultantOfLinearFactors) {
  const Polynomial p({{-1.0, 0.0}, {1.0, 0.0}});
  const Polynomial q({{-4.0, 0.0}, {1.0, 0.0}});
  EXPECT_NEAR(std::abs(resultant(p, q)), 3.0, 1e-12);
  const Polynomial pq({{4.0, 0.0}, {-5.0, 0.0}, {1.0, 0.0}});  // (z-1)(z-4)
  EXPECT_NEAR(std::abs(resultant(pq, p)), 0.0, 1e-12);
}

TEST(Rational, RejectsDegenerateInput) {
  const Polynomial shared({{4.0, 0.0}, {-5.0, 0.0}, {1.0, 0.0}});
  EXPECT_THROW(RationalCurve(shared, Polynomial({{-1.0, 0.0}, {1.0, 0.0}})),
               std::invalid_argument);
  EXPECT_THROW(RationalCurve(shared, Polynomial()), std::invalid_argument);
}

TEST(Rational, IdentityDerivative) {
  const auto f = MeromorphicCurve::identity();
  for (double x : {0.0, 0.5, 2.0, 10.0}) {
    EXPECT_NEAR(f.spherical_derivative({x, 0.3}), 1.0 / (1.0 + x * x + 0.09), 1e-15);
  }
}

TEST(Rational, PoleIsFiniteAndReciprocalInvariant) {
  const auto inv = MeromorphicCurve::monomial({1.0, 0.0}, -1);
  EXPECT_NEAR(inv.spherical_derivative({0.0, 0.0}), 1.0, 1e-15);
  EXPECT_TRUE(std::isinf(inv.value({0.0, 0.0}).real()));
  const auto f = sample_rational();
  const RationalCurve g(f.denominator(), f.numerator());
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int k = 0; k < 200; ++k) {
    const Complex z{u(rng), u(rng)};
    EXPECT_NEAR(f.spherical_derivative(z), g.spherical_derivative(z),
                1e-12 * (1.0 + f.spherical_derivative(z)));
  }
  EXPECT_NEAR(f.spherical_derivative({3.0, 0.0}), g.spherical_derivative({3.0, 0.0}), 1e-15);
}

TEST(Rational, MatchesChordalDifferenceQuotient) {
  const auto f = sample_rational();
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  const double h = 1e-6;
  for (int k = 0; k < 100; ++k) {
    const Complex z{u(rng), u(rng)};
    if (std::abs(z - Complex{3.0, 0.0}) < 0.05) continue;
    const double fd = chordal(f.value(z), f.value(z + Complex{h, 0.0})) / h;
    EXPECT_NEAR(f.spherical_derivative(z), fd, 1e-5 * (1.0 + fd));
  }
}

TEST(Rational, ParsesJson) {
  const auto f = parse_rational_json(R"({"numerator": [[0,0],[1,0]], "denominator": [[1,0]]})");
  EXPECT_NEAR(f.spherical_derivative({1.0, 0.0}), 0.5, 1e-15);
  EXPECT_THROW(parse_rational_json("{"), ConfigError);
  EXPECT_THROW(parse_rational_json(R"({"numerator": [[1,0]]})"), ConfigError);
}

// Independent lattice enumeration for the cluster sum.
std::vector<Complex> lattice_points(const ClusterSpec& spec) {
  std::set<std::pair<long, long>> pts;
  for (int n = 1; n <= spec.n_max; ++n) {
    const double a = spec.center(n);
    for (long x = static_cast<long>(a) - n - 1; x <= static_cast<long>(a) + n + 1; ++x) {
      for (long y = -n; y <= n; ++y) {
        if ((x - a) * (x - a) + static_cast<double>(y * y) <= n * n + 1e-9) pts.insert({x, y});
      }
    }
  }
  std::vector<Complex> out;
  for (const auto& [x, y] : pts) out.emplace_back(static_cast<double>(x), static_cast<double>(y));
  return out;
}

TEST(Cluster, MatchesDirectSum) {
  ClusterSpec spec;
  spec.n_max = 4;
  const ClusterCurve curve(spec, 1.0, 0.0);
  const auto pts = lattice_points(spec);
  EXPECT_EQ(curve.lattice_size(), pts.size());
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> ux(-1.0, 19.0), uy(-4.0, 4.0);
  for (int k = 0; k < 300; ++k) {
    const Complex w{ux(rng), uy(rng)};
    double nearest = 1e9;
    Complex g{}, dg{};
    for (const auto& p : pts) {
      nearest = std::min(nearest, std::abs(w - p));
      g += 1.0 / std::pow(w - p, 3);
      dg += -3.0 / std::pow(w - p, 4);
    }
    if (nearest < 0.05) continue;
    const auto ev = curve.evaluate_w(w);
    const double direct = std::abs(dg) / (1.0 + std::norm(g));
    EXPECT_NEAR(ev.spherical, direct, 1e-9 * (1.0 + direct)) << w;
    EXPECT_NEAR(std::abs(ev.g - g), 0.0, 1e-9 * (1.0 + std::abs(g)));
  }
}

TEST(Cluster, ContinuousAcrossPoleBranch) {
  ClusterSpec spec;
  spec.n_max = 3;
  const ClusterCurve curve(spec, 1.0);
  const Complex pole{4.0, 1.0};
  // The branch switches at |u| = 1/2; the slope there is below 1e4.
  const auto inside = curve.evaluate_w(pole + Complex{0.5 - 1e-10, 0.0});
  const auto outside = curve.evaluate_w(pole + Complex{0.5 + 1e-10, 0.0});
  EXPECT_TRUE(inside.reciprocal);
  EXPECT_NEAR(inside.spherical, outside.spherical, 1e-5);
  EXPECT_NEAR(std::abs(inside.g - outside.g), 0.0, 1e-6);
  const auto at_pole = curve.evaluate_w(pole);
  EXPECT_TRUE(at_pole.reciprocal);
  EXPECT_EQ(at_pole.spherical, 0.0);  // triple pole: |dg| vanishes
}

TEST(Cluster, TruncationAndTail) {
  ClusterSpec spec;
  spec.n_max = 5;
  const ClusterCurve loose(spec, 1.0, 1e-3);
  const ClusterCurve tight(spec, 1.0, 0.5e-3);
  const Complex w{20.3, 0.7};
  const auto a = loose.evaluate_w(w);
  const auto b = tight.evaluate_w(w);
  EXPECT_LE(std::abs(a.g - b.g), a.dropped_bound + 1e-15);
  EXPECT_GT(a.dropped_bound, 0.0);
  // Brute-force clusters n_max+1 .. 4 n_max against the analytic tail bound.
  ClusterSpec wide = spec;
  wide.n_max = 4 * spec.n_max;
  const auto pts_small = lattice_points(spec);
  const auto pts_wide = lattice_points(wide);
  std::set<std::pair<double, double>> small_set;
  for (const auto& p : pts_small) small_set.insert({p.real(), p.imag()});
  double tail = 0.0;
  for (const auto& p : pts_wide) {
    if (!small_set.count({p.real(), p.imag()})) tail += std::pow(std::abs(w - p), -3);
  }
  EXPECT_LE(tail, loose.omitted_tail_bound(w));
  EXPECT_THROW(loose.evaluate_w({loose.valid_radius(), 0.0}), std::domain_error);
}

TEST(Cluster, SpecValidation) {
  ClusterSpec bad;
  bad.center_power = 1.0;  // a_n = n: clusters overlap
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  ClusterSpec zero;
  zero.n_max = 0;
  EXPECT_THROW(zero.validate(), std::invalid_argument);
}

TEST(Cluster, CalibrationHoldsOnFinerGrid) {
  ClusterSpec spec;
  spec.n_max = 3;
  const auto cal = calibrate_c(spec, 0.1, 0.05);
  EXPECT_NEAR(cal.c, 0.9 / cal.sup_dg, 1e-15);
  const MeromorphicCurve f(build_cluster_curve(spec, cal.c));
  const auto region = cluster_region(spec);
  const auto check = brody_constant(f, {region.lo / cal.c, region.hi / cal.c}, 0.02 / cal.c);
  EXPECT_LE(check.sup_estimate, 1.0);
  EXPECT_GT(check.sup_estimate, 0.8);
}

TEST(Cluster, EnergyIsScaleInvariant) {
  // int_{B_{t/c}(a/c)} |df_c|^2 dz does not depend on c while c sup|dg| < 1.
  ClusterSpec spec;
  spec.n_max = 2;
  QuadratureConfig q;
  q.abs_tol = 1e-3;
  double masses[2];
  int k = 0;
  for (double c : {0.004, 0.008}) {
    const auto field = curve_energy_field(MeromorphicCurve(build_cluster_curve(spec, c)));
    QuadratureConfig qc = q;
    qc.cell = 0.01 / c;
    masses[k++] = ball_mass(field, Point{4.0 / c, 0.0}, 1.0 / c, qc).value;
  }
  EXPECT_NEAR(masses[0], masses[1], 5e-3);
  EXPECT_GT(masses[0], 1.0);
}

TEST(Energy, ClipsAreCounted) {
  const auto steep = MeromorphicCurve::monomial({3.0, 0.0}, 1);
  const auto field = curve_energy_field(steep);
  EXPECT_EQ(field(Point{0.0, 0.0}), 1.0);
  EXPECT_EQ(energy_clip_count(field), 1u);
  const auto flat = curve_energy_field(MeromorphicCurve::identity());
  EXPECT_NEAR(flat(Point{1.0, 0.0}), 0.25, 1e-15);
  EXPECT_EQ(energy_clip_count(flat), 0u);
  EXPECT_EQ(energy_clip_count(constant_field(2, 0.5)), 0u);
}

TEST(Brody, SampledSupremumOfIdentity) {
  const auto est = brody_constant(MeromorphicCurve::identity(), {{-2.0, -2.0}, {2.0, 2.0}}, 0.1);
  EXPECT_NEAR(est.sup_estimate, 1.0, 1e-12);
  EXPECT_LT(std::abs(est.argmax), 1e-9);
}

}  // namespace
