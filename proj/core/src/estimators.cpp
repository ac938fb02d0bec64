#include "edens/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

namespace edens {

std::string_view to_string(ScheduleRole role) {
  switch (role) {
    case ScheduleRole::outer_R: return "outer-R";
    case ScheduleRole::inner_r: return "inner-r";
    case ScheduleRole::nsa_r: return "nsa-r";
  }
  return "unknown";
}

RadiusSchedule::RadiusSchedule(std::vector<double> radii, ScheduleRole role)
    : radii_(std::move(radii)), role_(role) {
  if (radii_.empty()) throw std::invalid_argument("radius schedule: empty");
  for (std::size_t i = 0; i < radii_.size(); ++i) {
    if (!(radii_[i] > 0.0) || !std::isfinite(radii_[i])) {
      throw std::invalid_argument("radius schedule: radii must be positive and finite");
    }
    if (i > 0 && !(radii_[i] > radii_[i - 1])) {
      throw std::invalid_argument("radius schedule: radii must be strictly increasing");
    }
  }
  if (role_ == ScheduleRole::nsa_r && radii_.front() < 1.0) {
    throw std::invalid_argument("radius schedule: nsa-r schedules start at r >= 1");
  }
}

RadiusSchedule RadiusSchedule::geometric(double first, double last, int count, ScheduleRole role) {
  if (count < 1) throw std::invalid_argument("radius schedule: count must be >= 1");
  if (count == 1) return RadiusSchedule({first}, role);
  std::vector<double> radii(static_cast<std::size_t>(count));
  // Octave form keeps power-of-two ratios exact.
  const double octaves = std::log2(last / first);
  for (int k = 0; k < count; ++k) {
    radii[static_cast<std::size_t>(k)] = first * std::exp2(octaves * k / (count - 1));
  }
  radii.front() = first;
  radii.back() = last;
  return RadiusSchedule(std::move(radii), role);
}

std::vector<double> geometric_t_grid(double lo, double hi, int points_per_octave) {
  if (!(lo > 0.0) || !(hi >= lo)) throw std::invalid_argument("t-grid: need 0 < lo <= hi");
  if (points_per_octave < 1) throw std::invalid_argument("t-grid: points_per_octave >= 1");
  std::vector<double> grid{lo};
  auto k = static_cast<long>(std::floor(points_per_octave * std::log2(lo)));
  for (;; ++k) {
    const double t = std::exp2(static_cast<double>(k) / points_per_octave);
    if (t >= hi * (1.0 - 1e-12)) break;
    if (t > lo * (1.0 + 1e-12)) grid.push_back(t);
  }
  if (hi > lo) grid.push_back(hi);
  return grid;
}

bool non_increasing_within(std::span<const TableRow> rows) {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = i + 1; j < rows.size(); ++j) {
      if (rows[j].estimate > rows[i].estimate + rows[i].error_bound + rows[j].error_bound) {
        return false;
      }
    }
  }
  return true;
}

bool non_decreasing_within(std::span<const TableRow> rows) {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = i + 1; j < rows.size(); ++j) {
      if (rows[j].estimate < rows[i].estimate - rows[i].error_bound - rows[j].error_bound) {
        return false;
      }
    }
  }
  return true;
}

namespace {

constexpr double kPi = std::numbers::pi;

std::string num(double v) {
  std::ostringstream out;
  out.precision(10);
  out << v;
  return out.str();
}

std::string point_string(const Point& p) {
  std::string s = "(";
  for (int i = 0; i < p.dim(); ++i) {
    if (i) s += ";";
    s += num(p[i]);
  }
  return s + ")";
}

void echo_quadrature(std::map<std::string, std::string>& cfg, const QuadratureConfig& q) {
  cfg["quadrature.radial"] = std::to_string(q.radial);
  cfg["quadrature.angular"] = std::to_string(q.angular);
  cfg["quadrature.cell"] = num(q.cell);
  cfg["quadrature.max_levels"] = std::to_string(q.max_levels);
  cfg["quadrature.abs_tol"] = num(q.abs_tol);
  cfg["quadrature.rel_tol"] = num(q.rel_tol);
}

void echo_search(std::map<std::string, std::string>& cfg, const TranslateSearchConfig& s) {
  cfg["search.lo"] = point_string(s.lo);
  cfg["search.hi"] = point_string(s.hi);
  cfg["search.spacing"] = num(s.spacing);
  cfg["search.refine_passes"] = std::to_string(s.refine_passes);
}

void echo_schedule(std::map<std::string, std::string>& cfg, const RadiusSchedule& s) {
  std::string v;
  for (double r : s.radii()) {
    if (!v.empty()) v += ";";
    v += num(r);
  }
  cfg[std::string("schedule.") + std::string(to_string(s.role()))] = v;
}

std::string trend_of(const std::vector<TableRow>& rows) {
  if (rows.size() < 2) return "single row";
  const std::size_t n = rows.size();
  const std::size_t from = n >= 3 ? n - 3 : 0;
  bool dec = true, inc = true, flat = true;
  for (std::size_t i = from + 1; i < n; ++i) {
    const double d = rows[i].estimate - rows[i - 1].estimate;
    const double slack = rows[i].error_bound + rows[i - 1].error_bound;
    if (d > 0.0) dec = false;
    if (d < 0.0) inc = false;
    if (std::abs(d) > slack) flat = false;
  }
  if (flat) return "flat within error bounds over the last rows";
  if (dec) return "decreasing over the last rows";
  if (inc) return "increasing over the last rows";
  return "oscillating over the last rows";
}

void finalize(ConvergenceTable& table, const EstimatorOptions& options) {
  if (table.rows.empty()) throw std::logic_error("empty convergence table");
  const auto& last = table.rows.back();
  table.extrapolated = last.estimate;
  table.extrapolated_error = last.error_bound;
  table.trend = trend_of(table.rows);
  if (options.richardson && table.rows.size() >= 2) {
    const auto& prev = table.rows[table.rows.size() - 2];
    if (last.radius != prev.radius) {
      const double fit = (last.radius * last.estimate - prev.radius * prev.estimate) /
                         (last.radius - prev.radius);
      table.extrapolated_error = last.error_bound + std::abs(fit - last.estimate);
      table.extrapolated = fit;
      table.trend += "; richardson L + C/R fit";
    }
  }
}

void clip_warning(DensityReport& report, const DensityField& field, std::uint64_t before) {
  const auto after = energy_clip_count(field);
  if (after > before) {
    report.warnings.push_back("clipping activated on " + std::to_string(after - before) +
                              " samples with |df| > 1 (curve is not Brody)");
  }
}

double lipschitz_average(const DensityField& field, double spacing, double t) {
  // 2 |S_t| h sup(phi) / |B_t| = 2 D h sup(phi) / t
  return 2.0 * field.dim() * spacing * field.upper_bound() / t;
}

struct InfResult {
  double value = 0.0;
  double error = 0.0;
  double at = 0.0;
};

// inf over the grid of the ball average, then one pass at the geometric
// midpoints next to the minimizer.
InfResult inf_average(const MassProfile& prof, std::span<const double> grid) {
  const int dim = prof.dim();
  auto avg = [&](double t) { return prof.mass(t) / ball_volume(dim, t); };
  InfResult best{std::numeric_limits<double>::infinity(), 0.0, 0.0};
  std::size_t arg = 0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double v = avg(grid[k]);
    if (v < best.value) {
      best = {v, prof.error(grid[k]) / ball_volume(dim, grid[k]), grid[k]};
      arg = k;
    }
  }
  std::vector<double> extra;
  if (arg > 0) extra.push_back(std::sqrt(grid[arg - 1] * grid[arg]));
  if (arg + 1 < grid.size()) extra.push_back(std::sqrt(grid[arg] * grid[arg + 1]));
  for (double t : extra) {
    const double v = avg(t);
    if (v < best.value) best = {v, prof.error(t) / ball_volume(dim, t), t};
  }
  return best;
}

std::vector<double> merge_sorted(std::vector<double> a, std::span<const double> b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

struct PairKey {
  double r;
  double R;
};

}  // namespace

RhoPair rho_and_rho_tilde(const DensityField& field, const RadiusSchedule& inner,
                          const RadiusSchedule& outer, const TranslateSearchConfig& search,
                          const QuadratureConfig& q, const EstimatorOptions& options) {
  search.validate();
  check_same_dim(search.lo, Point::zero(field.dim()));
  const int dim = field.dim();
  const auto clips_before = energy_clip_count(field);

  std::vector<PairKey> pairs;
  std::vector<std::vector<double>> grids;
  std::vector<double> probes = outer.radii();
  for (double r : inner.radii()) {
    for (double R : outer.radii()) {
      if (!(r < R)) continue;
      pairs.push_back({r, R});
      grids.push_back(geometric_t_grid(r, R, 16));
      probes = merge_sorted(std::move(probes), grids.back());
    }
  }
  if (pairs.empty()) {
    throw std::invalid_argument("rho_tilde: need at least one pair with r < R");
  }

  ProfileCache cache(field, outer.back(), probes, q);
  cache.prefetch(search.grid());

  RhoPair out;
  out.rho.functional = "rho";
  out.rho.subject = field.description();
  out.rho_tilde.functional = "rho_tilde";
  out.rho_tilde.subject = field.description();
  for (auto* rep : {&out.rho, &out.rho_tilde}) {
    echo_quadrature(rep->config, q);
    echo_search(rep->config, search);
    echo_schedule(rep->config, outer);
  }
  echo_schedule(out.rho_tilde.config, inner);

  for (double R : outer.radii()) {
    const double vol = ball_volume(dim, R);
    const auto best = maximize_over_translates(search, [&](const Point& a) {
      const auto& prof = cache.at(a);
      return MassEstimate{prof.mass(R) / vol, prof.error(R) / vol};
    });
    TableRow row;
    row.radius = R;
    row.estimate = best.value;
    row.error_bound = lipschitz_average(field, search.spacing, R) + best.quadrature_error;
    row.flags = "argmax=" + point_string(best.argmax);
    out.rho.table.rows.push_back(row);
  }
  out.rho.table.flags["non_increasing_in_R"] = non_increasing_within(out.rho.table.rows);
  finalize(out.rho.table, options);

  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto [r, R] = pairs[p];
    const auto& grid = grids[p];
    double inf_at = r;
    const auto best = maximize_over_translates(search, [&](const Point& a) {
      const auto res = inf_average(cache.at(a), grid);
      return MassEstimate{res.value, res.error};
    });
    const auto& prof = cache.at(best.argmax);
    inf_at = inf_average(prof, grid).at;
    const auto finer = inf_average(prof, geometric_t_grid(r, R, 32));
    TableRow row;
    row.r = r;
    row.radius = R;
    row.estimate = best.value;
    row.error_bound = lipschitz_average(field, search.spacing, r) + best.quadrature_error;
    row.flags = "argmax=" + point_string(best.argmax) + ";inf_at=" + num(inf_at);
    const double tol = q.tolerance(dim, inf_at) / ball_volume(dim, inf_at);
    if (std::abs(finer.value - best.value) > tol) {
      row.flags += ";t_grid_refinement_shift";
      out.rho_tilde.warnings.push_back("t-grid inf for (r=" + num(r) + ", R=" + num(R) +
                                       ") moved by " + num(best.value - finer.value) +
                                       " under 2x refinement");
    }
    out.rho_tilde.table.rows.push_back(row);
  }
  // Monotonicity in R at fixed r, and in r at fixed R.
  bool in_R = true, in_r = true;
  auto& rows = out.rho_tilde.table.rows;
  for (double r : inner.radii()) {
    std::vector<TableRow> group;
    for (const auto& row : rows) {
      if (row.r && *row.r == r) group.push_back(row);
    }
    in_R = in_R && non_increasing_within(group);
  }
  for (double R : outer.radii()) {
    std::vector<TableRow> group;
    for (const auto& row : rows) {
      if (row.radius == R) group.push_back(row);
    }
    in_r = in_r && non_decreasing_within(group);
  }
  out.rho_tilde.table.flags["non_increasing_in_R"] = in_R;
  out.rho_tilde.table.flags["non_decreasing_in_r"] = in_r;
  // Headline: largest r, then largest R.
  std::stable_sort(rows.begin(), rows.end(), [](const TableRow& a, const TableRow& b) {
    return *a.r < *b.r || (*a.r == *b.r && a.radius < b.radius);
  });
  finalize(out.rho_tilde.table, {});
  clip_warning(out.rho, field, clips_before);
  clip_warning(out.rho_tilde, field, clips_before);
  return out;
}

DensityReport rho_estimate(const DensityField& field, const RadiusSchedule& outer,
                           const TranslateSearchConfig& search, const QuadratureConfig& q,
                           const EstimatorOptions& options) {
  search.validate();
  check_same_dim(search.lo, Point::zero(field.dim()));
  const int dim = field.dim();
  const auto clips_before = energy_clip_count(field);
  ProfileCache cache(field, outer.back(), outer.radii(), q);
  cache.prefetch(search.grid());
  DensityReport rep;
  rep.functional = "rho";
  rep.subject = field.description();
  echo_quadrature(rep.config, q);
  echo_search(rep.config, search);
  echo_schedule(rep.config, outer);
  for (double R : outer.radii()) {
    const double vol = ball_volume(dim, R);
    const auto best = maximize_over_translates(search, [&](const Point& a) {
      const auto& prof = cache.at(a);
      return MassEstimate{prof.mass(R) / vol, prof.error(R) / vol};
    });
    TableRow row;
    row.radius = R;
    row.estimate = best.value;
    row.error_bound = lipschitz_average(field, search.spacing, R) + best.quadrature_error;
    row.flags = "argmax=" + point_string(best.argmax);
    rep.table.rows.push_back(row);
  }
  rep.table.flags["non_increasing_in_R"] = non_increasing_within(rep.table.rows);
  finalize(rep.table, options);
  clip_warning(rep, field, clips_before);
  return rep;
}

DensityReport rho_tilde_estimate(const DensityField& field, const RadiusSchedule& inner,
                                 const RadiusSchedule& outer, const TranslateSearchConfig& search,
                                 const QuadratureConfig& q, const EstimatorOptions& options) {
  return rho_and_rho_tilde(field, inner, outer, search, q, options).rho_tilde;
}

namespace {

double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm,
               double fb, double whole, double eps, int depth, double& err) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * eps) {
    err += std::abs(delta) / 15.0;
    return left + right + delta / 15.0;
  }
  return simpson(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1, err) +
         simpson(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1, err);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double eps,
                        double& err) {
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson(f, a, b, fa, fm, fb, whole, eps, 40, err);
}

// Outer integral of T(r): adaptive Simpson on each shell of the profile,
// where the interpolated mass is smooth.
MassEstimate characteristic_from_profile(const MassProfile& prof, double r, double eps) {
  if (r < 1.0) throw std::invalid_argument("T(r, f) is defined for r >= 1");
  if (r == 1.0) return {0.0, 0.0};
  const auto shells = prof.shells();
  const double width = prof.t_max() / static_cast<double>(shells.size());
  const auto f = [&](double t) { return prof.mass(t) / t; };
  double total = 0.0;
  double err = 0.0;
  double a = 1.0;
  const double span = r - 1.0;
  while (a < r) {
    const double next_edge = (std::floor(a / width + 1e-9) + 1.0) * width;
    const double b = std::min(next_edge, r);
    if (b > a) total += adaptive_simpson(f, a, b, eps * (b - a) / span, err);
    a = b;
  }
  // Quadrature error of the inner masses, integrated against dt / t.
  const auto probes = geometric_t_grid(1.0, r, 8);
  for (std::size_t k = 0; k + 1 < probes.size(); ++k) {
    const double e = std::max(prof.error(probes[k]), prof.error(probes[k + 1]));
    err += e * std::log(probes[k + 1] / probes[k]);
  }
  return {total, err};
}

}  // namespace

MassEstimate nsa_characteristic(const DensityField& energy, double r, const QuadratureConfig& q) {
  if (energy.dim() != 2) throw std::invalid_argument("T(r, f) needs a 2-D energy field");
  if (r < 1.0) throw std::invalid_argument("T(r, f) is defined for r >= 1");
  if (r == 1.0) return {0.0, 0.0};
  const auto probes = geometric_t_grid(1.0, r, 8);
  const auto prof = ball_mass_profile(energy, Point::zero(2), r, probes, q);
  return characteristic_from_profile(prof, r, q.abs_tol);
}

NsaEstimate rho_nsa_estimate(const DensityField& energy, const RadiusSchedule& schedule,
                             const QuadratureConfig& q) {
  if (energy.dim() != 2) throw std::invalid_argument("NSA densities need a 2-D energy field");
  if (schedule.front() < 1.0) throw std::invalid_argument("NSA schedule must start at r >= 1");
  const auto clips_before = energy_clip_count(energy);
  const double r_max = schedule.back();
  NsaEstimate out;
  ConvergenceTable table;
  if (r_max > 1.0) {
    const auto probes = merge_sorted(geometric_t_grid(1.0, r_max, 8), schedule.radii());
    const auto prof = ball_mass_profile(energy, Point::zero(2), r_max, probes, q);
    for (double r : schedule.radii()) out.characteristic.push_back(characteristic_from_profile(prof, r, q.abs_tol));
  } else {
    out.characteristic.push_back({0.0, 0.0});
  }
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    const double r = schedule.radii()[i];
    TableRow row;
    row.radius = r;
    row.estimate = 2.0 * out.characteristic[i].value / (kPi * r * r);
    row.error_bound = 2.0 * out.characteristic[i].error / (kPi * r * r);
    row.flags = "T=" + num(out.characteristic[i].value);
    table.rows.push_back(row);
  }
  table.flags["non_increasing_in_r"] = non_increasing_within(table.rows);
  table.trend = trend_of(table.rows);
  const std::size_t from = table.rows.size() / 2;
  std::size_t hi = from, lo = from;
  for (std::size_t i = from; i < table.rows.size(); ++i) {
    if (table.rows[i].estimate > table.rows[hi].estimate) hi = i;
    if (table.rows[i].estimate < table.rows[lo].estimate) lo = i;
  }
  out.upper.functional = "rho_nsa_upper";
  out.lower.functional = "rho_nsa_lower";
  for (auto* rep : {&out.upper, &out.lower}) {
    rep->subject = energy.description();
    rep->table = table;
    echo_quadrature(rep->config, q);
    echo_schedule(rep->config, schedule);
    rep->config["window"] = "trailing half: rows " + std::to_string(from) + ".." +
                            std::to_string(table.rows.size() - 1);
    clip_warning(*rep, energy, clips_before);
  }
  out.upper.table.extrapolated = table.rows[hi].estimate;
  out.upper.table.extrapolated_error = table.rows[hi].error_bound;
  out.lower.table.extrapolated = table.rows[lo].estimate;
  out.lower.table.extrapolated_error = table.rows[lo].error_bound;
  return out;
}

DensityReport rho_family_estimate(std::span<const DensityField> family,
                                  const RadiusSchedule& outer, const QuadratureConfig& q) {
  if (family.empty()) throw std::invalid_argument("rho_family: empty family");
  const int dim = family.front().dim();
  for (const auto& m : family) {
    if (m.dim() != dim) throw std::invalid_argument("rho_family: mixed dimensions");
  }
  std::vector<MassProfile> profiles(family.size());
  for (std::size_t i = 0; i < family.size(); ++i) {
    profiles[i] = ball_mass_profile(family[i], Point::zero(dim), outer.back(), outer.radii(), q);
  }
  DensityReport rep;
  rep.functional = "rho_family";
  rep.subject = family.front().description() + " (+" + std::to_string(family.size() - 1) + " members)";
  echo_quadrature(rep.config, q);
  echo_schedule(rep.config, outer);
  rep.config["family.size"] = std::to_string(family.size());
  for (double R : outer.radii()) {
    const double vol = ball_volume(dim, R);
    std::size_t best = 0;
    for (std::size_t i = 1; i < profiles.size(); ++i) {
      if (profiles[i].mass(R) > profiles[best].mass(R)) best = i;
    }
    TableRow row;
    row.radius = R;
    row.estimate = profiles[best].mass(R) / vol;
    row.error_bound = profiles[best].error(R) / vol;
    row.flags = "member=" + std::to_string(best);
    rep.table.rows.push_back(row);
  }
  rep.table.flags["non_increasing_in_R"] = non_increasing_within(rep.table.rows);
  finalize(rep.table, {});
  return rep;
}

DensityReport ow_average(const DensityField& field, bool sup_translate,
                         std::span<const Region> sequence, const TranslateSearchConfig& search,
                         const QuadratureConfig& q) {
  const auto diag = folner_diagnostics(sequence, 1.0);
  if (!diag.consistent) {
    throw std::invalid_argument("ow_average: region sequence is not Folner-consistent "
                                "(boundary ratios must strictly decrease)");
  }
  const int dim = field.dim();
  for (const auto& reg : sequence) {
    if (region_dim(reg) != dim) throw std::invalid_argument("ow_average: region dimension");
  }
  search.validate();
  DensityReport rep;
  rep.functional = "ow_average";
  rep.subject = field.description();
  echo_quadrature(rep.config, q);
  if (sup_translate) echo_search(rep.config, search);
  rep.config["sup_translate"] = sup_translate ? "true" : "false";

  // Balls share one profile per centre.
  double ball_max = 0.0;
  std::vector<double> ball_radii;
  for (const auto& reg : sequence) {
    if (const auto* b = std::get_if<Ball>(&reg)) {
      ball_max = std::max(ball_max, b->radius);
      ball_radii.push_back(b->radius);
    }
  }
  std::optional<ProfileCache> cache;
  if (ball_max > 0.0) cache.emplace(field, ball_max, ball_radii, q);

  auto mass_at = [&](const Region& reg, const Point& a) -> MassEstimate {
    if (const auto* b = std::get_if<Ball>(&reg)) {
      const auto& prof = cache->at(b->center + a);
      return {prof.mass(b->radius), prof.error(b->radius)};
    }
    const auto& box = std::get<BoxRegion>(reg);
    return box_mass(field, BoxRegion{box.lo + a, box.hi + a}, q);
  };

  for (const auto& reg : sequence) {
    const double vol = region_volume(reg);
    TableRow row;
    if (const auto* b = std::get_if<Ball>(&reg)) {
      row.radius = b->radius;
    } else {
      const auto& box = std::get<BoxRegion>(reg);
      for (int i = 0; i < dim; ++i) row.radius = std::max(row.radius, box.hi[i] - box.lo[i]);
    }
    if (sup_translate) {
      const auto best = maximize_over_translates(search, [&](const Point& a) {
        const auto m = mass_at(reg, a);
        return MassEstimate{m.value / vol, m.error / vol};
      });
      row.estimate = best.value;
      row.error_bound = 2.0 * region_surface_area(reg) * search.spacing * field.upper_bound() / vol +
                        best.quadrature_error;
      row.flags = region_label(reg) + ";argmax=" + point_string(best.argmax);
    } else {
      const auto m = mass_at(reg, Point::zero(dim));
      row.estimate = m.value / vol;
      row.error_bound = m.error / vol;
      row.flags = region_label(reg);
    }
    rep.table.rows.push_back(row);
  }
  finalize(rep.table, {});
  return rep;
}

OrbitReport translate_orbit_experiment(const MeromorphicCurve& f, std::span<const Complex> centers,
                                       const RadiusSchedule& inner, double R,
                                       const QuadratureConfig& q,
                                       const std::optional<DensityReport>& rho_reference) {
  if (centers.empty()) throw std::invalid_argument("orbit experiment: no centres");
  if (!(R >= inner.front())) throw std::invalid_argument("orbit experiment: R < min r");
  const auto field = curve_energy_field(f);
  const auto grid = geometric_t_grid(inner.front(), R, 16);
  const double t_max = std::max(R, inner.back());
  const auto probes = merge_sorted(grid, inner.radii());
  OrbitReport rep;
  rep.subject = f.description();
  rep.R = R;
  for (const auto& c : centers) {
    const auto prof = ball_mass_profile(field, Point{c.real(), c.imag()}, t_max, probes, q);
    OrbitCenter oc;
    oc.center = c;
    for (double t : inner.radii()) {
      const double vol = ball_volume(2, t);
      TableRow row;
      row.radius = t;
      row.estimate = prof.mass(t) / vol;
      row.error_bound = prof.error(t) / vol;
      oc.profile.push_back(row);
    }
    const auto inf = inf_average(prof, grid);
    oc.inf_value = inf.value;
    oc.inf_error = inf.error;
    oc.inf_at = inf.at;
    oc.R = R;
    rep.centers.push_back(std::move(oc));
  }
  for (std::size_t i = 1; i < rep.centers.size(); ++i) {
    if (rep.centers[i].inf_value > rep.centers[rep.best].inf_value) rep.best = i;
  }
  rep.best_inf = rep.centers[rep.best].inf_value;
  if (rho_reference) {
    rep.rho_reference = rho_reference->table.extrapolated;
    rep.rho_reference_error = rho_reference->table.extrapolated_error;
  }
  return rep;
}

std::vector<DensityReport> OrbitReport::to_reports() const {
  DensityReport profile;
  profile.functional = "orbit_profile";
  profile.subject = subject;
  DensityReport infs;
  infs.functional = "orbit_inf";
  infs.subject = subject;
  infs.config["R"] = num(R);
  if (rho_reference) infs.config["rho_reference"] = num(*rho_reference);
  for (std::size_t i = 0; i < centers.size(); ++i) {
    const auto& c = centers[i];
    const std::string tag = "center=(" + num(c.center.real()) + ";" + num(c.center.imag()) + ")";
    for (const auto& row : c.profile) {
      TableRow r = row;
      r.flags = tag;
      profile.table.rows.push_back(r);
    }
    TableRow r;
    r.r = c.profile.empty() ? 0.0 : c.profile.front().radius;
    r.radius = c.R;
    r.estimate = c.inf_value;
    r.error_bound = c.inf_error;
    r.flags = tag + ";inf_at=" + num(c.inf_at) + (i == best ? ";best" : "");
    infs.table.rows.push_back(r);
  }
  profile.table.trend = "per-centre profiles";
  infs.table.extrapolated = best_inf;
  infs.table.extrapolated_error = centers[best].inf_error;
  infs.table.trend = "best centre index " + std::to_string(best);
  return {profile, infs};
}

}  // namespace edens
