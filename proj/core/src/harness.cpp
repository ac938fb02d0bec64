#include "edens/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>
#include <random>
#include <sstream>

#include "edens/covering.hpp"
#include "edens/report_io.hpp"
#include "json.hpp"

namespace edens {

bool VerifyResult::passed() const {
  return std::all_of(criteria.begin(), criteria.end(), [](const auto& c) { return c.passed; });
}

namespace {

constexpr double kPi = std::numbers::pi;
using Clock = std::chrono::steady_clock;

std::string num(double v) {
  std::ostringstream out;
  out.precision(6);
  out << v;
  return out.str();
}

CriterionResult criterion(int id, std::string name) {
  CriterionResult res;
  res.id = id;
  res.name = std::move(name);
  return res;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct PeriodicCase {
  std::string label;
  DensityField field;
  double fraction;
  RhoPair reports;
};

struct CurveCase {
  std::string label;
  MeromorphicCurve curve;
  DensityField energy;
  BrodyEstimate brody;
  NsaEstimate nsa;
  DensityReport rho;
  std::uint64_t clips = 0;
};

class Suite {
 public:
  explicit Suite(const VerifyConfig& config) : cfg_(config) {}

  VerifyResult run(const CriterionCallback& on_result);

 private:
  bool wanted(int id) const { return cfg_.criteria.count(id) > 0; }
  void finish(CriterionResult result, Clock::time_point start, const CriterionCallback& cb);

  CriterionResult vitali();
  CriterionResult nsa_oracle();
  void build_periodic();
  CriterionResult periodic_equality();
  CriterionResult family_consistency();
  CriterionResult ow_independence();
  CriterionResult monotonicity();
  void build_curves();
  CriterionResult brody_bounds();
  CriterionResult cluster_split();
  CriterionResult inequality_chain();

  QuadratureConfig cluster_quadrature(double c, double abs_tol) const {
    return edens::cluster_quadrature(cfg_, c, abs_tol);
  }
  ClusterExperiment cluster_orbit(const ClusterSpec& spec,
                                  const std::optional<DensityReport>& reference);

  const VerifyConfig& cfg_;
  VerifyResult out_;
  std::vector<PeriodicCase> periodic_;
  std::vector<CurveCase> curves_;
  std::optional<Calibration> cluster_calibration_;
  double curve_seconds_ = 0.0;
};

void Suite::finish(CriterionResult result, Clock::time_point start,
                   const CriterionCallback& cb) {
  result.seconds = seconds_since(start);
  const auto limit = cfg_.time_limits.find(result.id);
  if (limit != cfg_.time_limits.end() && result.seconds > limit->second) {
    result.passed = false;
    result.detail += "; runtime " + num(result.seconds) + " s exceeds " + num(limit->second) + " s";
  }
  if (cb) cb(result);
  out_.criteria.push_back(std::move(result));
}

CriterionResult Suite::vitali() {
  auto res = criterion(1, "vitali covering on random families");
  std::mt19937_64 rng(cfg_.seed);
  std::uniform_int_distribution<int> dim_dist(1, 3);
  std::uniform_int_distribution<int> count_dist(1, cfg_.vitali_max_balls);
  std::uniform_real_distribution<double> pos(0.0, cfg_.vitali_extent);
  std::uniform_real_distribution<double> rad(cfg_.vitali_min_radius, cfg_.vitali_max_radius);
  std::size_t violations = 0;
  std::size_t balls = 0;
  std::size_t selected = 0;
  for (int f = 0; f < cfg_.vitali_families; ++f) {
    const int dim = dim_dist(rng);
    const int count = count_dist(rng);
    std::vector<Ball> family;
    family.reserve(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
      Point c = Point::zero(dim);
      for (int i = 0; i < dim; ++i) c[i] = pos(rng);
      family.push_back(make_ball(c, rad(rng)));
    }
    const BallFamily fam(dim, std::move(family));
    const auto sel = vitali_select(fam);
    violations += verify_cover(fam, sel).violations.size();
    balls += fam.size();
    selected += sel.size();
  }
  res.measured = static_cast<double>(violations);
  res.threshold = 0.0;
  res.passed = violations == 0;
  res.detail = std::to_string(cfg_.vitali_families) + " families, " + std::to_string(balls) +
               " balls, " + std::to_string(selected) + " selected, " +
               std::to_string(violations) + " violations";
  return res;
}

CriterionResult Suite::nsa_oracle() {
  auto res = criterion(2, "closed-form characteristic of f(z) = z");
  const auto energy = curve_energy_field(MeromorphicCurve::identity());
  const RadiusSchedule schedule(cfg_.oracle_radii, ScheduleRole::nsa_r);
  auto nsa = rho_nsa_estimate(energy, schedule, cfg_.oracle_quadrature);
  double worst = 0.0;
  std::string detail;
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    const double r = schedule.radii()[i];
    const double exact = 0.5 * kPi * std::log((1.0 + r * r) / 2.0);
    const double rel = std::abs(nsa.characteristic[i].value - exact) / exact;
    worst = std::max(worst, rel);
    detail += "r=" + num(r) + " rel=" + num(rel) + "; ";
  }
  bool decreasing = true;
  const auto& rows = nsa.upper.table.rows;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    decreasing = decreasing && rows[i].estimate < rows[i - 1].estimate;
  }
  res.measured = worst;
  res.threshold = cfg_.oracle_rel_tol;
  res.passed = worst <= cfg_.oracle_rel_tol && decreasing;
  res.detail = detail + (decreasing ? "rows strictly decreasing" : "rows NOT decreasing");
  nsa.upper.subject = nsa.lower.subject = "oracle " + nsa.upper.subject;
  out_.reports.push_back(nsa.upper);
  out_.reports.push_back(nsa.lower);
  return res;
}

void Suite::build_periodic() {
  if (!periodic_.empty()) return;
  periodic_.push_back({"disk lattice", disk_lattice_field(2, 0.25, 1.0), kPi / 16.0, {}});
  periodic_.push_back({"stripes", stripe_field(1.0, 0.5), 0.5, {}});
  const RadiusSchedule outer(cfg_.outer_radii, ScheduleRole::outer_R);
  const RadiusSchedule inner(cfg_.inner_radii, ScheduleRole::inner_r);
  for (auto& pc : periodic_) {
    const auto search = default_search(pc.field, cfg_.search_spacing);
    pc.reports = rho_and_rho_tilde(pc.field, inner, outer, search, cfg_.periodic_quadrature);
    out_.reports.push_back(pc.reports.rho);
    out_.reports.push_back(pc.reports.rho_tilde);
  }
}

CriterionResult Suite::periodic_equality() {
  auto res = criterion(3, "rho = rho_tilde on periodic fields");
  double worst = 0.0;
  for (const auto& pc : periodic_) {
    const double rho = pc.reports.rho.table.extrapolated;
    const double tilde = pc.reports.rho_tilde.table.extrapolated;
    const double dev = std::max({std::abs(rho - tilde), std::abs(rho - pc.fraction),
                                 std::abs(tilde - pc.fraction)});
    worst = std::max(worst, dev);
    res.detail += pc.label + ": rho=" + num(rho) + " rho_tilde=" + num(tilde) +
                  " fraction=" + num(pc.fraction) + "; ";
  }
  res.measured = worst;
  res.threshold = cfg_.equality_tolerance;
  res.passed = worst <= cfg_.equality_tolerance;
  return res;
}

CriterionResult Suite::family_consistency() {
  auto res = criterion(4, "family of translates vs single field");
  const auto& lattice = periodic_.front();
  std::vector<DensityField> family;
  for (double x = 0.0; x < 1.0 - 1e-9; x += cfg_.family_spacing) {
    for (double y = 0.0; y < 1.0 - 1e-9; y += cfg_.family_spacing) {
      family.push_back(translate(lattice.field, Point{x, y}));
    }
  }
  const RadiusSchedule outer(cfg_.outer_radii, ScheduleRole::outer_R);
  auto rep = rho_family_estimate(family, outer, cfg_.periodic_quadrature);
  rep.subject = "translates of " + lattice.field.description();
  const auto& rho = lattice.reports.rho.table;
  const double diff = std::abs(rep.table.extrapolated - rho.extrapolated);
  const double combined = rep.table.extrapolated_error + rho.extrapolated_error;
  res.measured = diff;
  res.threshold = combined;
  res.passed = diff <= combined && combined <= cfg_.equality_tolerance;
  res.detail = "family=" + num(rep.table.extrapolated) + " rho=" + num(rho.extrapolated) +
               " combined error=" + num(combined) + " (cap " + num(cfg_.equality_tolerance) +
               "), " + std::to_string(family.size()) + " members";
  out_.reports.push_back(std::move(rep));
  return res;
}

CriterionResult Suite::ow_independence() {
  auto res = criterion(5, "Ornstein-Weiss averages: balls vs squares");
  const auto field = disk_lattice_field(2, 0.25, 1.0);
  std::vector<Region> balls;
  std::vector<Region> squares;
  for (double n : cfg_.ow_sizes) {
    balls.push_back(make_ball(Point::zero(2), n));
    squares.push_back(make_cube(2, n));
  }
  const auto search = default_search(field, cfg_.search_spacing);
  auto ball_rep = ow_average(field, true, balls, search, cfg_.periodic_quadrature);
  auto square_rep = ow_average(field, true, squares, search, cfg_.periodic_quadrature);
  ball_rep.subject += " over balls";
  square_rep.subject += " over squares";
  const double diff = std::abs(ball_rep.table.extrapolated - square_rep.table.extrapolated);
  res.measured = diff;
  res.threshold = cfg_.equality_tolerance;
  res.passed = diff <= cfg_.equality_tolerance;
  res.detail = "balls=" + num(ball_rep.table.extrapolated) +
               " squares=" + num(square_rep.table.extrapolated);
  out_.reports.push_back(std::move(ball_rep));
  out_.reports.push_back(std::move(square_rep));
  return res;
}

CriterionResult Suite::monotonicity() {
  auto res = criterion(6, "rho_tilde monotonicity in R and r");
  int failures = 0;
  for (const auto& pc : periodic_) {
    const auto& flags = pc.reports.rho_tilde.table.flags;
    for (const char* key : {"non_increasing_in_R", "non_decreasing_in_r"}) {
      const auto it = flags.find(key);
      const bool ok = it != flags.end() && it->second;
      if (!ok) ++failures;
      res.detail += pc.label + " " + key + "=" + (ok ? "true" : "false") + "; ";
    }
  }
  res.measured = failures;
  res.threshold = 0.0;
  res.passed = failures == 0;
  return res;
}

void Suite::build_curves() {
  if (!curves_.empty()) return;
  const auto start = Clock::now();
  const RadiusSchedule radii(cfg_.curve_radii, ScheduleRole::nsa_r);
  const RadiusSchedule outer(cfg_.curve_radii, ScheduleRole::outer_R);
  const auto search = box_search(Point::zero(2), cfg_.curve_search_half_width,
                                 cfg_.curve_search_spacing);
  const ComplexBox box{{-cfg_.brody_half_width, -cfg_.brody_half_width},
                       {cfg_.brody_half_width, cfg_.brody_half_width}};
  const std::vector<std::pair<std::string, MeromorphicCurve>> rationals = {
      {"constant", MeromorphicCurve::constant({1.0, 0.0})},
      {"z", MeromorphicCurve::identity()},
      {"z^2/2", MeromorphicCurve::monomial({0.5, 0.0}, 2)},
  };
  for (const auto& [label, curve] : rationals) {
    CurveCase cc{label, curve, curve_energy_field(curve), {}, {}, {}, 0};
    cc.brody = brody_constant(curve, box, cfg_.brody_spacing);
    cc.nsa = rho_nsa_estimate(cc.energy, radii, cfg_.curve_quadrature);
    cc.rho = rho_estimate(cc.energy, outer, search, cfg_.curve_rho_quadrature);
    cc.clips = energy_clip_count(cc.energy);
    curves_.push_back(std::move(cc));
  }

  // Calibrated cluster curve.
  const auto& spec = cfg_.cluster;
  cluster_calibration_ = calibrate_c(spec, cfg_.calibration_margin, cfg_.calibration_spacing);
  const double c = cluster_calibration_->c;
  MeromorphicCurve curve(build_cluster_curve(spec, c));
  CurveCase cc{"cluster", curve, curve_energy_field(curve), {}, {}, {}, 0};
  const auto region = cluster_region(spec);
  cc.brody = brody_constant(curve, {region.lo / c, region.hi / c}, cfg_.brody_check_spacing / c);
  std::vector<double> gaps;
  for (int n = 2; n <= std::min(5, spec.n_max - 1); ++n) {
    gaps.push_back((spec.center(n) + spec.center(n + 1)) / (2.0 * c));
  }
  cc.nsa = rho_nsa_estimate(cc.energy, RadiusSchedule(gaps, ScheduleRole::nsa_r),
                            cluster_quadrature(c, cfg_.cluster_nsa_abs_tol));
  std::vector<double> rho_radii;
  for (double r : cfg_.cluster_rho_radii) rho_radii.push_back(r / c);
  auto cluster_search = box_search(Point{spec.center(spec.n_max) / c, 0.0},
                                   cfg_.cluster_search_half_width / c,
                                   cfg_.cluster_search_spacing / c);
  cluster_search.refine_passes = cfg_.cluster_search_refine_passes;
  cc.rho = rho_estimate(cc.energy, RadiusSchedule(rho_radii, ScheduleRole::outer_R),
                        cluster_search, cluster_quadrature(c, cfg_.cluster_orbit_abs_tol));
  cc.clips = energy_clip_count(cc.energy);
  curves_.push_back(std::move(cc));

  for (const auto& cv : curves_) {
    out_.reports.push_back(cv.nsa.upper);
    out_.reports.push_back(cv.nsa.lower);
    out_.reports.push_back(cv.rho);
  }
  curve_seconds_ = seconds_since(start);
}

CriterionResult Suite::brody_bounds() {
  auto res = criterion(7, "Brody bounds on bundled curves");
  double worst = -std::numeric_limits<double>::infinity();
  bool ok = true;
  for (const auto& cv : curves_) {
    const double sup_excess = cv.brody.sup_estimate - 1.0;
    worst = std::max(worst, sup_excess);
    ok = ok && sup_excess <= cfg_.brody_slack && cv.clips == 0;
    double t_excess = -std::numeric_limits<double>::infinity();
    const auto& rows = cv.nsa.upper.table.rows;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const double r = rows[i].radius;
      t_excess = std::max(t_excess, cv.nsa.characteristic[i].value - kPi * r * r / 2.0);
    }
    ok = ok && t_excess <= cfg_.characteristic_slack;
    res.detail += cv.label + ": sup|df|=" + num(cv.brody.sup_estimate) +
                  " clipped=" + std::to_string(cv.clips) + " max(T - pi r^2/2)=" + num(t_excess) +
                  "; ";
  }
  res.measured = worst;
  res.threshold = cfg_.brody_slack;
  res.passed = ok;
  return res;
}

ClusterExperiment Suite::cluster_orbit(const ClusterSpec& spec,
                                       const std::optional<DensityReport>& reference) {
  auto run = run_cluster_experiment(cfg_, spec, reference);
  for (auto& rep : run.orbit.to_reports()) out_.reports.push_back(std::move(rep));
  return run;
}

CriterionResult Suite::cluster_split() {
  auto res = criterion(8, "sparse cluster curve: positive floor, decaying NSA rows");
  const auto& cluster = curves_.back();
  ClusterSpec small = cfg_.cluster;
  small.n_max = cfg_.cluster_small_n_max;
  const auto run_small = cluster_orbit(small, std::nullopt);
  const auto run_full = cluster_orbit(cfg_.cluster, cluster.rho);
  const double f_small = run_small.orbit.best_inf;
  const double f_full = run_full.orbit.best_inf;
  const bool positive = f_small - run_small.floor_error > 0.0 && f_full - run_full.floor_error > 0.0;
  const double change = std::abs(f_full - f_small) / f_full;

  const auto& rows = cluster.nsa.upper.table.rows;
  bool decreasing = rows.size() >= 2;
  double min_drop = std::numeric_limits<double>::infinity();
  std::string row_text;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    row_text += num(rows[i].estimate) + (i + 1 < rows.size() ? " > " : "");
    if (i > 0) {
      decreasing = decreasing && rows[i].estimate < rows[i - 1].estimate;
      min_drop = std::min(min_drop, rows[i - 1].estimate - rows[i].estimate);
    }
  }
  res.measured = change;
  res.threshold = cfg_.floor_stability;
  res.passed = positive && change <= cfg_.floor_stability && decreasing;
  res.detail = "floor N=" + std::to_string(small.n_max) + ": " + num(f_small) +
               " (c=" + num(run_small.calibration.c) + "), N=" + std::to_string(cfg_.cluster.n_max) +
               ": " + num(f_full) + " (c=" + num(run_full.calibration.c) + ")" +
               (positive ? "" : " NOT positive") + "; gap rows " + row_text +
               (decreasing ? " strictly decreasing" : " NOT strictly decreasing") +
               " (smallest drop " + num(min_drop) + ")";
  return res;
}

CriterionResult Suite::inequality_chain() {
  auto res = criterion(9, "lower NSA <= upper NSA <= rho");
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& cv : curves_) {
    const auto& lo = cv.nsa.lower.table;
    const auto& hi = cv.nsa.upper.table;
    const auto& rho = cv.rho.table;
    const double first = lo.extrapolated - hi.extrapolated - lo.extrapolated_error -
                         hi.extrapolated_error;
    const double second = hi.extrapolated - rho.extrapolated - hi.extrapolated_error -
                          rho.extrapolated_error;
    worst = std::max({worst, first, second});
    std::string verdict = "holds";
    if (first > 0.0 || second > 0.0) {
      verdict = "violated by " + num(std::max(first, second));
    } else if (hi.extrapolated > rho.extrapolated) {
      verdict = "holds only within error bounds";
    }
    res.detail += cv.label + ": " + num(lo.extrapolated) + " <= " + num(hi.extrapolated) +
                  " <= " + num(rho.extrapolated) + " + " +
                  num(hi.extrapolated_error + rho.extrapolated_error) + " (" + verdict + "); ";
  }
  res.measured = worst;
  res.threshold = 0.0;
  res.passed = worst <= 0.0;
  return res;
}

VerifyResult Suite::run(const CriterionCallback& on_result) {
  if (wanted(1)) {
    const auto start = Clock::now();
    finish(vitali(), start, on_result);
  }
  if (wanted(2)) {
    const auto start = Clock::now();
    finish(nsa_oracle(), start, on_result);
  }
  if (wanted(3) || wanted(4) || wanted(6)) {
    const auto start = Clock::now();
    build_periodic();
    if (wanted(3)) finish(periodic_equality(), start, on_result);
  }
  if (wanted(4)) {
    const auto start = Clock::now();
    finish(family_consistency(), start, on_result);
  }
  if (wanted(5)) {
    const auto start = Clock::now();
    finish(ow_independence(), start, on_result);
  }
  if (wanted(6)) {
    const auto start = Clock::now();
    finish(monotonicity(), start, on_result);
  }
  if (wanted(7) || wanted(8) || wanted(9)) {
    const auto start = Clock::now();
    build_curves();
    if (wanted(7)) finish(brody_bounds(), start, on_result);
  }
  if (wanted(8)) {
    // Includes the centred NSA profile of the full cluster curve.
    const auto start = Clock::now();
    auto res = cluster_split();
    res.detail += "; shared curve setup " + num(curve_seconds_) + " s";
    const auto shared = std::chrono::duration_cast<Clock::duration>(
        std::chrono::duration<double>(curve_seconds_));
    finish(std::move(res), start - shared, on_result);
  }
  if (wanted(9)) {
    const auto start = Clock::now();
    finish(inequality_chain(), start, on_result);
  }
  out_.csv = reports_to_csv(out_.reports);
  return std::move(out_);
}

}  // namespace

QuadratureConfig cluster_quadrature(const VerifyConfig& cfg, double c, double abs_tol) {
  QuadratureConfig q = cfg.curve_quadrature;
  q.cell = cfg.cluster_cell / c;
  q.abs_tol = abs_tol;
  // Tolerance per unit lattice area, expressed per unit area in z.
  q.rel_tol = cfg.cluster_rel_tol * c * c;
  return q;
}

ClusterExperiment run_cluster_experiment(const VerifyConfig& cfg, const ClusterSpec& spec,
                                         const std::optional<DensityReport>& reference) {
  ClusterExperiment run;
  run.calibration = calibrate_c(spec, cfg.calibration_margin, cfg.calibration_spacing);
  const double c = run.calibration.c;
  const MeromorphicCurve curve(build_cluster_curve(spec, c));
  const auto q = cluster_quadrature(cfg, c, cfg.cluster_orbit_abs_tol);
  run.orbit.subject = curve.description();
  for (int n = 2; n <= spec.n_max; ++n) {
    std::vector<double> inner;
    for (int k = 1; k <= n; ++k) inner.push_back(k / c);
    const std::vector<Complex> center{{spec.center(n) / c, 0.0}};
    auto one = translate_orbit_experiment(curve, center, RadiusSchedule(inner, ScheduleRole::inner_r),
                                          n / c, q);
    run.orbit.centers.push_back(one.centers.front());
  }
  auto& centers = run.orbit.centers;
  for (std::size_t i = 1; i < centers.size(); ++i) {
    if (centers[i].inf_value > centers[run.orbit.best].inf_value) run.orbit.best = i;
  }
  run.orbit.best_inf = centers[run.orbit.best].inf_value;
  run.orbit.R = centers[run.orbit.best].R;
  run.floor_error = centers[run.orbit.best].inf_error;
  if (reference) {
    run.orbit.rho_reference = reference->table.extrapolated;
    run.orbit.rho_reference_error = reference->table.extrapolated_error;
  }
  return run;
}

VerifyResult run_verification(const VerifyConfig& config, const CriterionCallback& on_result) {
  VerifyConfig first = config;
  first.criteria.erase(10);
  auto result = Suite(first).run(on_result);
  if (config.criteria.count(10) > 0) {
    const auto start = Clock::now();
    auto res = criterion(10, "determinism of verify artifacts");
    if (config.check_determinism) {
      const auto again = Suite(first).run({});
      const bool same = again.csv == result.csv;
      res.measured = same ? 0.0 : 1.0;
      res.passed = same;
      res.detail = std::to_string(result.csv.size()) + " CSV bytes per run, " +
                   (same ? "byte-identical" : "outputs differ");
    } else {
      res.passed = true;
      res.detail = "rerun disabled";
    }
    res.seconds = seconds_since(start);
    if (on_result) on_result(res);
    result.criteria.push_back(res);
  }
  return result;
}

std::string summary_json(const VerifyResult& result) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : result.criteria) {
    nlohmann::json j;
    j["id"] = c.id;
    j["name"] = c.name;
    j["passed"] = c.passed;
    j["measured"] = c.measured;
    j["threshold"] = c.threshold;
    j["margin"] = c.threshold - c.measured;
    j["detail"] = c.detail;
    j["seconds"] = c.seconds;
    arr.push_back(j);
  }
  nlohmann::json out;
  out["passed"] = result.passed();
  out["criteria"] = arr;
  return out.dump(2);
}

std::string format_criterion(const CriterionResult& r) {
  std::ostringstream out;
  out << (r.passed ? "[PASS] " : "[FAIL] ") << r.id << " " << r.name << ": measured "
      << num(r.measured) << ", threshold " << num(r.threshold) << ", " << num(r.seconds)
      << " s (" << r.detail << ")";
  return out.str();
}

}  // namespace edens
