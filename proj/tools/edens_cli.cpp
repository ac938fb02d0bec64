// edens: command line runner for density estimators, coverings and the
// verification suite.  Every run reads one YAML config and writes its
// artifacts into the output directory.

#include <yaml-cpp/yaml.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "edens/covering.hpp"
#include "edens/curves.hpp"
#include "edens/error.hpp"
#include "edens/estimators.hpp"
#include "edens/harness.hpp"
#include "edens/parallel.hpp"
#include "edens/report_io.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace edens;

namespace {

constexpr int kExitVerifyFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitConvergence = 3;

struct Options {
  std::string command;
  std::string config_path;
  std::string out_dir = ".";
  int workers = 0;
  std::optional<double> tolerance;
  std::optional<std::uint64_t> seed;
};

// ---------------------------------------------------------------------------
// Config access

class Config {
 public:
  Config() : root_(YAML::Node(YAML::NodeType::Map)) {}
  Config(YAML::Node root, fs::path base) : root_(std::move(root)), base_(std::move(base)) {
    if (!root_.IsMap()) throw ConfigError("config: top level must be a mapping");
    check_keys(root_, "config",
               {"seed", "workers", "quadrature", "field", "schedules", "search", "density",
                "curve", "brody", "vitali", "ow", "verify"});
  }

  YAML::Node section(const std::string& name) const {
    YAML::Node n = root_[name];
    if (n && !n.IsMap()) throw ConfigError("config: section '" + name + "' must be a mapping");
    return n;
  }
  YAML::Node root() const { return root_; }

  fs::path resolve(const std::string& rel) const {
    fs::path p(rel);
    if (p.is_relative()) p = base_ / p;
    if (!fs::exists(p)) throw ConfigError("config: file not found: " + p.string());
    return p;
  }

  static void check_keys(const YAML::Node& node, const std::string& where,
                         const std::set<std::string>& allowed) {
    if (!node) return;
    for (const auto& kv : node) {
      const auto key = kv.first.as<std::string>();
      if (!allowed.count(key)) throw ConfigError("config: unknown key '" + key + "' in " + where);
    }
  }

 private:
  YAML::Node root_;
  fs::path base_;
};

template <class T>
void read(const YAML::Node& node, const char* key, T& target) {
  if (node && node[key]) target = node[key].as<T>();
}

Point to_point(const std::vector<double>& v) {
  switch (v.size()) {
    case 1: return Point{v[0]};
    case 2: return Point{v[0], v[1]};
    case 3: return Point{v[0], v[1], v[2]};
    default: throw ConfigError("config: points need 1 to 3 coordinates");
  }
}

Complex to_complex(const YAML::Node& node) {
  if (node.IsScalar()) return {node.as<double>(), 0.0};
  const auto v = node.as<std::vector<double>>();
  if (v.size() != 2) throw ConfigError("config: complex numbers are [re, im]");
  return {v[0], v[1]};
}

QuadratureConfig read_quadrature(const YAML::Node& node, QuadratureConfig q) {
  Config::check_keys(node, "quadrature",
                     {"radial", "angular", "cell", "max_levels", "abs_tol", "rel_tol"});
  read(node, "radial", q.radial);
  read(node, "angular", q.angular);
  read(node, "cell", q.cell);
  read(node, "max_levels", q.max_levels);
  read(node, "abs_tol", q.abs_tol);
  read(node, "rel_tol", q.rel_tol);
  return q;
}

QuadratureConfig quadrature(const Config& cfg, const Options& opt) {
  auto q = read_quadrature(cfg.section("quadrature"), QuadratureConfig{});
  if (opt.tolerance) q.abs_tol = *opt.tolerance;
  q.validate();
  return q;
}

DensityField read_field(const Config& cfg) {
  const auto node = cfg.section("field");
  if (!node) throw ConfigError("config: missing 'field' section");
  Config::check_keys(node, "field",
                     {"kind", "dim", "value", "center", "radius", "axis", "period", "fraction",
                      "spacing", "clusters", "path"});
  const auto kind = node["kind"] ? node["kind"].as<std::string>() : std::string("constant");
  int dim = 2;
  read(node, "dim", dim);
  if (kind == "constant") {
    double value = 1.0;
    read(node, "value", value);
    return constant_field(dim, value);
  }
  if (kind == "ball") {
    std::vector<double> center(static_cast<std::size_t>(dim), 0.0);
    double radius = 1.0;
    read(node, "center", center);
    read(node, "radius", radius);
    return ball_indicator_field(make_ball(to_point(center), radius));
  }
  if (kind == "half_space") {
    int axis = 0;
    read(node, "axis", axis);
    return half_space_field(dim, axis);
  }
  if (kind == "stripes") {
    double period = 1.0, fraction = 0.5;
    read(node, "period", period);
    read(node, "fraction", fraction);
    return stripe_field(period, fraction);
  }
  if (kind == "disk_lattice") {
    double radius = 0.25, spacing = 1.0;
    read(node, "radius", radius);
    read(node, "spacing", spacing);
    return disk_lattice_field(dim, radius, spacing);
  }
  if (kind == "sparse_cluster") {
    int clusters = 4;
    read(node, "clusters", clusters);
    return sparse_cluster_field(clusters);
  }
  if (kind == "grid") {
    if (!node["path"]) throw ConfigError("config: grid field needs 'path'");
    return load_grid_csv(cfg.resolve(node["path"].as<std::string>()));
  }
  throw ConfigError("config: unknown field kind '" + kind + "'");
}

RadiusSchedule read_schedule(const Config& cfg, const char* key, ScheduleRole role,
                             std::vector<double> fallback) {
  const auto node = cfg.section("schedules");
  Config::check_keys(node, "schedules", {"outer", "inner", "nsa"});
  if (node && node[key]) {
    const auto s = node[key];
    if (s.IsMap()) {
      Config::check_keys(s, key, {"first", "last", "count"});
      return RadiusSchedule::geometric(s["first"].as<double>(), s["last"].as<double>(),
                                       s["count"].as<int>(), role);
    }
    return RadiusSchedule(s.as<std::vector<double>>(), role);
  }
  return RadiusSchedule(std::move(fallback), role);
}

TranslateSearchConfig read_search(const Config& cfg, const DensityField& field) {
  const auto node = cfg.section("search");
  Config::check_keys(node, "search", {"spacing", "center", "half_width", "refine_passes"});
  double spacing = 0.1;
  read(node, "spacing", spacing);
  TranslateSearchConfig s;
  if (node && node["half_width"]) {
    std::vector<double> center(static_cast<std::size_t>(field.dim()), 0.0);
    read(node, "center", center);
    s = box_search(to_point(center), node["half_width"].as<double>(), spacing);
  } else if (field.period()) {
    s = default_search(field, spacing);
  } else {
    s = box_search(Point::zero(field.dim()), spacing, spacing);
  }
  read(node, "refine_passes", s.refine_passes);
  s.validate();
  return s;
}

MeromorphicCurve read_curve(const Config& cfg) {
  const auto node = cfg.section("curve");
  if (!node) throw ConfigError("config: missing 'curve' section");
  Config::check_keys(node, "curve",
                     {"kind", "value", "coefficient", "power", "path", "cluster", "c", "margin"});
  const auto kind = node["kind"] ? node["kind"].as<std::string>() : std::string("identity");
  if (kind == "identity") return MeromorphicCurve::identity();
  if (kind == "constant") {
    return MeromorphicCurve::constant(node["value"] ? to_complex(node["value"]) : Complex{});
  }
  if (kind == "monomial") {
    int power = 1;
    read(node, "power", power);
    return MeromorphicCurve::monomial(
        node["coefficient"] ? to_complex(node["coefficient"]) : Complex{1.0, 0.0}, power);
  }
  if (kind == "rational") {
    if (!node["path"]) throw ConfigError("config: rational curve needs 'path'");
    return load_rational_json(cfg.resolve(node["path"].as<std::string>()));
  }
  throw ConfigError("config: unknown curve kind '" + kind + "'");
}

ClusterSpec read_cluster_spec(const YAML::Node& node, ClusterSpec spec) {
  Config::check_keys(node, "cluster", {"n_max", "center_scale", "center_power"});
  read(node, "n_max", spec.n_max);
  read(node, "center_scale", spec.center_scale);
  read(node, "center_power", spec.center_power);
  spec.validate();
  return spec;
}

VerifyConfig read_verify(const Config& cfg, const Options& opt) {
  VerifyConfig v;
  const auto node = cfg.section("verify");
  Config::check_keys(
      node, "verify",
      {"criteria", "equality_tolerance", "time_limits", "vitali_families", "vitali_max_balls",
       "vitali_min_radius", "vitali_max_radius", "vitali_extent", "oracle_radii",
       "oracle_rel_tol", "oracle_quadrature", "outer_radii", "inner_radii", "search_spacing",
       "periodic_quadrature", "family_spacing", "ow_sizes", "curve_radii", "curve_quadrature",
       "curve_rho_quadrature",
       "curve_search_half_width", "curve_search_spacing", "brody_half_width", "brody_spacing",
       "brody_slack", "characteristic_slack", "cluster", "cluster_small_n_max",
       "calibration_margin", "calibration_spacing", "brody_check_spacing", "cluster_cell",
       "cluster_rel_tol", "cluster_orbit_abs_tol", "cluster_nsa_abs_tol", "floor_stability",
       "cluster_rho_radii", "cluster_search_half_width", "cluster_search_spacing",
       "cluster_search_refine_passes", "check_determinism"});
  if (cfg.root()["seed"]) v.seed = cfg.root()["seed"].as<std::uint64_t>();
  if (node) {
    if (node["criteria"]) {
      const auto ids = node["criteria"].as<std::vector<int>>();
      v.criteria = std::set<int>(ids.begin(), ids.end());
    }
    if (node["time_limits"]) v.time_limits = node["time_limits"].as<std::map<int, double>>();
    read(node, "equality_tolerance", v.equality_tolerance);
    read(node, "vitali_families", v.vitali_families);
    read(node, "vitali_max_balls", v.vitali_max_balls);
    read(node, "vitali_min_radius", v.vitali_min_radius);
    read(node, "vitali_max_radius", v.vitali_max_radius);
    read(node, "vitali_extent", v.vitali_extent);
    read(node, "oracle_radii", v.oracle_radii);
    read(node, "oracle_rel_tol", v.oracle_rel_tol);
    v.oracle_quadrature = read_quadrature(node["oracle_quadrature"], v.oracle_quadrature);
    read(node, "outer_radii", v.outer_radii);
    read(node, "inner_radii", v.inner_radii);
    read(node, "search_spacing", v.search_spacing);
    v.periodic_quadrature = read_quadrature(node["periodic_quadrature"], v.periodic_quadrature);
    read(node, "family_spacing", v.family_spacing);
    read(node, "ow_sizes", v.ow_sizes);
    read(node, "curve_radii", v.curve_radii);
    v.curve_quadrature = read_quadrature(node["curve_quadrature"], v.curve_quadrature);
    v.curve_rho_quadrature = read_quadrature(node["curve_rho_quadrature"], v.curve_rho_quadrature);
    read(node, "curve_search_half_width", v.curve_search_half_width);
    read(node, "curve_search_spacing", v.curve_search_spacing);
    read(node, "brody_half_width", v.brody_half_width);
    read(node, "brody_spacing", v.brody_spacing);
    read(node, "brody_slack", v.brody_slack);
    read(node, "characteristic_slack", v.characteristic_slack);
    if (node["cluster"]) v.cluster = read_cluster_spec(node["cluster"], v.cluster);
    read(node, "cluster_small_n_max", v.cluster_small_n_max);
    read(node, "calibration_margin", v.calibration_margin);
    read(node, "calibration_spacing", v.calibration_spacing);
    read(node, "brody_check_spacing", v.brody_check_spacing);
    read(node, "cluster_cell", v.cluster_cell);
    read(node, "cluster_rel_tol", v.cluster_rel_tol);
    read(node, "cluster_orbit_abs_tol", v.cluster_orbit_abs_tol);
    read(node, "cluster_nsa_abs_tol", v.cluster_nsa_abs_tol);
    read(node, "floor_stability", v.floor_stability);
    read(node, "cluster_rho_radii", v.cluster_rho_radii);
    read(node, "cluster_search_half_width", v.cluster_search_half_width);
    read(node, "cluster_search_spacing", v.cluster_search_spacing);
    read(node, "cluster_search_refine_passes", v.cluster_search_refine_passes);
    read(node, "check_determinism", v.check_determinism);
  }
  if (opt.seed) v.seed = *opt.seed;
  if (opt.tolerance) v.equality_tolerance = *opt.tolerance;
  return v;
}

// ---------------------------------------------------------------------------
// Output

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Writes report.json and table.csv and checks that the JSON reads back equal.
void write_reports(const fs::path& dir, const std::vector<DensityReport>& reports,
                   const std::string& csv) {
  const auto json_path = dir / "report.json";
  write_file(json_path, reports_to_json(reports));
  write_file(dir / "table.csv", csv);
  if (reports_from_json(read_file(json_path)) != reports) {
    throw std::runtime_error("report.json does not read back to the written reports");
  }
}

void write_reports(const fs::path& dir, const std::vector<DensityReport>& reports) {
  write_reports(dir, reports, reports_to_csv(reports));
}

void print_headlines(const std::vector<DensityReport>& reports) {
  for (const auto& rep : reports) {
    std::cout << rep.functional << " " << rep.subject << ": " << rep.table.extrapolated
              << " +- " << rep.table.extrapolated_error << " (" << rep.table.trend << ")\n";
    for (const auto& w : rep.warnings) std::cout << "  warning: " << w << "\n";
  }
}

// ---------------------------------------------------------------------------
// Subcommands

int run_density(const Config& cfg, const Options& opt, const fs::path& out) {
  const auto field = read_field(cfg);
  const auto q = quadrature(cfg, opt);
  const auto node = cfg.section("density");
  Config::check_keys(node, "density", {"estimators", "richardson", "translates"});
  std::vector<std::string> estimators{"rho"};
  read(node, "estimators", estimators);
  EstimatorOptions eo;
  read(node, "richardson", eo.richardson);

  const auto outer = read_schedule(cfg, "outer", ScheduleRole::outer_R, {1.0, 2.0, 4.0, 8.0});
  std::vector<DensityReport> reports;
  for (const auto& name : estimators) {
    if (name == "rho") {
      reports.push_back(rho_estimate(field, outer, read_search(cfg, field), q, eo));
    } else if (name == "rho_tilde") {
      std::vector<double> fallback;
      for (double R : outer.radii()) fallback.push_back(R / 2.0);
      const auto inner = read_schedule(cfg, "inner", ScheduleRole::inner_r, fallback);
      reports.push_back(rho_tilde_estimate(field, inner, outer, read_search(cfg, field), q, eo));
    } else if (name == "rho_family") {
      std::vector<DensityField> family{field};
      if (node && node["translates"]) {
        for (const auto& a : node["translates"].as<std::vector<std::vector<double>>>()) {
          family.push_back(translate(field, to_point(a)));
        }
      }
      reports.push_back(rho_family_estimate(family, outer, q));
    } else {
      throw ConfigError("config: unknown estimator '" + name + "'");
    }
  }
  write_reports(out, reports);
  print_headlines(reports);
  return 0;
}

int run_nsa(const Config& cfg, const Options& opt, const fs::path& out) {
  const auto curve = read_curve(cfg);
  const auto q = quadrature(cfg, opt);
  const auto schedule = read_schedule(cfg, "nsa", ScheduleRole::nsa_r, {1.0, 2.0, 4.0, 8.0, 16.0});
  const auto energy = curve_energy_field(curve);
  auto nsa = rho_nsa_estimate(energy, schedule, q);

  const auto bnode = cfg.section("brody");
  Config::check_keys(bnode, "brody", {"half_width", "spacing"});
  double half = 10.0, spacing = 0.05;
  read(bnode, "half_width", half);
  read(bnode, "spacing", spacing);
  const auto brody = brody_constant(curve, {{-half, -half}, {half, half}}, spacing);
  std::cout << "sampled sup |df| = " << brody.sup_estimate << " at " << brody.argmax.real()
            << (brody.argmax.imag() < 0 ? "" : "+") << brody.argmax.imag() << "i\n";
  if (brody.sup_estimate > 1.0) {
    const std::string w = "sampled sup |df| = " + std::to_string(brody.sup_estimate) +
                          " exceeds 1; the energy is clipped";
    nsa.upper.warnings.push_back(w);
    nsa.lower.warnings.push_back(w);
  }
  const std::vector<DensityReport> reports{nsa.upper, nsa.lower};
  write_reports(out, reports);
  print_headlines(reports);
  return 0;
}

int run_brody_example(const Config& cfg, const Options& opt, const fs::path& out) {
  auto v = read_verify(cfg, opt);
  const auto node = cfg.section("curve");
  Config::check_keys(node, "curve", {"kind", "cluster", "margin"});
  if (node && node["cluster"]) v.cluster = read_cluster_spec(node["cluster"], v.cluster);
  read(node, "margin", v.calibration_margin);
  const auto run = run_cluster_experiment(v, v.cluster);
  std::cout << "calibrated c = " << run.calibration.c << " (sampled sup |dg| = "
            << run.calibration.sup_dg << ")\n";
  for (const auto& center : run.orbit.centers) {
    std::cout << "centre " << center.center.real() << ": inf over [" << center.profile.front().radius
              << ", " << center.R << "] = " << center.inf_value << " +- " << center.inf_error
              << " at t = " << center.inf_at << "\n";
  }
  std::cout << "positive floor: " << run.orbit.best_inf << " +- " << run.floor_error << "\n";
  auto reports = run.orbit.to_reports();
  for (auto& rep : reports) {
    std::ostringstream c, s;
    c.precision(17);
    s.precision(17);
    c << run.calibration.c;
    s << run.calibration.sup_dg;
    rep.config["calibration.c"] = c.str();
    rep.config["calibration.sup_dg"] = s.str();
  }
  write_reports(out, reports);
  return 0;
}

int run_vitali(const Config& cfg, const fs::path& out) {
  const auto node = cfg.section("vitali");
  Config::check_keys(node, "vitali", {"family"});
  if (!node || !node["family"]) throw ConfigError("config: vitali needs 'family'");
  const auto family = load_ball_family_csv(cfg.resolve(node["family"].as<std::string>()));
  const auto selected = vitali_select(family);
  const auto report = verify_cover(family, selected);

  nlohmann::ordered_json j;
  j["dim"] = family.dim();
  j["balls"] = family.size();
  j["selected"] = selected;
  j["covered_by"] = report.covered_by;
  j["violations"] = nlohmann::json::array();
  for (const auto& v : report.violations) {
    j["violations"].push_back({{"kind", std::string(to_string(v.kind))},
                               {"first", v.first},
                               {"second", v.second},
                               {"detail", v.detail}});
  }
  j["ok"] = report.ok();
  write_file(out / "report.json", j.dump(2) + "\n");
  std::ostringstream csv;
  csv << "index,selected,covered_by\n";
  std::set<std::size_t> chosen(selected.begin(), selected.end());
  for (std::size_t i = 1; i <= family.size(); ++i) {
    csv << i << "," << (chosen.count(i) ? 1 : 0) << "," << report.covered_by[i - 1] << "\n";
  }
  write_file(out / "table.csv", csv.str());
  std::cout << "selected:";
  for (auto i : selected) std::cout << " " << i;
  std::cout << "\ncertificate: " << (report.ok() ? "ok" : "violated") << "\n";
  return report.ok() ? 0 : kExitVerifyFailed;
}

int run_ow(const Config& cfg, const Options& opt, const fs::path& out) {
  const auto field = read_field(cfg);
  const auto q = quadrature(cfg, opt);
  const auto node = cfg.section("ow");
  Config::check_keys(node, "ow", {"sizes", "sup_translate"});
  std::vector<double> sizes{5.0, 10.0, 20.0, 40.0};
  bool sup = true;
  read(node, "sizes", sizes);
  read(node, "sup_translate", sup);
  std::vector<Region> balls, cubes;
  for (double n : sizes) {
    balls.emplace_back(make_ball(Point::zero(field.dim()), n));
    cubes.emplace_back(make_cube(field.dim(), 2.0 * n));
  }
  const auto search = read_search(cfg, field);
  std::vector<DensityReport> reports{ow_average(field, sup, balls, search, q),
                                     ow_average(field, sup, cubes, search, q)};
  reports[0].subject += " over balls";
  reports[1].subject += " over cubes";
  write_reports(out, reports);
  print_headlines(reports);
  const double diff = std::abs(reports[0].table.extrapolated - reports[1].table.extrapolated);
  std::cout << "|balls - cubes| = " << diff << "\n";
  return 0;
}

int run_verify(const Config& cfg, const Options& opt, const fs::path& out) {
  const auto v = read_verify(cfg, opt);
  const auto result = run_verification(v, [](const CriterionResult& r) {
    std::cout << format_criterion(r) << std::endl;
  });
  write_reports(out, result.reports, result.csv);
  write_file(out / "summary.json", summary_json(result));
  std::cout << (result.passed() ? "all criteria passed" : "some criteria failed") << "\n";
  return result.passed() ? 0 : kExitVerifyFailed;
}

int dispatch(const Options& opt) {
  Config cfg;
  if (!opt.config_path.empty()) {
    const fs::path path(opt.config_path);
    if (!fs::exists(path)) throw ConfigError("config file not found: " + path.string());
    cfg = Config(YAML::LoadFile(path.string()), path.parent_path());
  }
  int workers = opt.workers;
  if (workers == 0 && cfg.root()["workers"]) workers = cfg.root()["workers"].as<int>();
  if (workers > 0) set_worker_count(workers);

  const fs::path out(opt.out_dir);
  fs::create_directories(out);
  if (opt.command == "density") return run_density(cfg, opt, out);
  if (opt.command == "nsa") return run_nsa(cfg, opt, out);
  if (opt.command == "brody-example") return run_brody_example(cfg, opt, out);
  if (opt.command == "vitali") return run_vitali(cfg, out);
  if (opt.command == "ow") return run_ow(cfg, opt, out);
  if (opt.command == "verify") return run_verify(cfg, opt, out);
  throw ConfigError("unknown command " + opt.command);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy densities of measures and Brody curves"};
  app.require_subcommand(1);
  Options opt;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"density", "rho, rho_tilde or family rho of a density field"},
      {"nsa", "characteristic function and NSA densities of a curve"},
      {"brody-example", "calibrate the sparse cluster curve and run its orbit experiment"},
      {"vitali", "greedy Vitali selection on a CSV ball family"},
      {"ow", "Folner averages over balls and cubes"},
      {"verify", "run the verification suite"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", opt.config_path, "YAML experiment config");
    sub->add_option("--out", opt.out_dir, "output directory")->capture_default_str();
    sub->add_option("--workers", opt.workers, "worker thread cap")->check(CLI::NonNegativeNumber);
    sub->add_option("--tolerance", opt.tolerance,
                    "quadrature abs_tol override (verify: equality tolerance)");
    sub->add_option("--seed", opt.seed, "seed for randomized tests");
    sub->callback([&opt, name = name] { opt.command = name; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    return dispatch(opt);
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConvergence;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const YAML::Exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitVerifyFailed;
  }
}
