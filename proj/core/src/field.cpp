#include "edens/field.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "edens/error.hpp"
#include "edens/parallel.hpp"

namespace edens {

std::string_view to_string(FieldKind kind) {
  switch (kind) {
    case FieldKind::constant: return "constant";
    case FieldKind::indicator_pattern: return "indicator-pattern";
    case FieldKind::periodic_disk_lattice: return "periodic-disk-lattice";
    case FieldKind::sparse_cluster: return "sparse-cluster";
    case FieldKind::curve_energy: return "curve-energy";
    case FieldKind::user_grid: return "user-grid";
    case FieldKind::analytic: return "analytic";
  }
  return "unknown";
}

DensityField::DensityField(int dim, FieldKind kind, std::shared_ptr<const FieldSource> source,
                           double upper_bound, std::optional<Point> period,
                           std::string description)
    : dim_(dim),
      kind_(kind),
      source_(std::move(source)),
      upper_bound_(upper_bound),
      period_(std::move(period)),
      description_(std::move(description)),
      offset_(Point::zero(dim)) {
  check_dim(dim);
  if (!source_) throw std::invalid_argument("DensityField: null source");
  if (!(upper_bound_ >= 0.0 && upper_bound_ <= 1.0)) {
    throw std::invalid_argument("DensityField: upper bound must lie in [0, 1]");
  }
  if (period_) {
    if (period_->dim() != dim) throw std::invalid_argument("DensityField: period dimension");
    for (int i = 0; i < dim; ++i) {
      if (!((*period_)[i] > 0.0)) throw std::invalid_argument("DensityField: period must be > 0");
    }
  }
}

DensityField translate(const DensityField& field, const Point& a) {
  if (a.dim() != field.dim()) {
    throw std::invalid_argument("translate: dimension mismatch (field " +
                                std::to_string(field.dim()) + ", point " +
                                std::to_string(a.dim()) + ")");
  }
  DensityField out = field;
  out.offset_ = field.offset_ + a;
  return out;
}

namespace {

class ConstantSource final : public FieldSource {
 public:
  explicit ConstantSource(double v) : v_(v) {}
  double operator()(const Point&) const override { return v_; }

 private:
  double v_;
};

class BallIndicatorSource final : public FieldSource {
 public:
  explicit BallIndicatorSource(Ball b) : b_(std::move(b)) {}
  double operator()(const Point& x) const override {
    double s = 0.0;
    for (int i = 0; i < x.dim(); ++i) {
      const double d = x[i] - b_.center[i];
      s += d * d;
    }
    return s <= b_.radius * b_.radius ? 1.0 : 0.0;
  }

 private:
  Ball b_;
};

class HalfSpaceSource final : public FieldSource {
 public:
  explicit HalfSpaceSource(int axis) : axis_(axis) {}
  double operator()(const Point& x) const override { return x[axis_] > 0.0 ? 1.0 : 0.0; }

 private:
  int axis_;
};

class StripeSource final : public FieldSource {
 public:
  StripeSource(double period, double fraction) : period_(period), fraction_(fraction) {}
  double operator()(const Point& x) const override {
    const double u = x[0] / period_;
    return (u - std::floor(u)) < fraction_ ? 1.0 : 0.0;
  }

 private:
  double period_;
  double fraction_;
};

class DiskLatticeSource final : public FieldSource {
 public:
  DiskLatticeSource(double radius, double spacing)
      : r2_(radius * radius / (spacing * spacing)), inv_spacing_(1.0 / spacing) {}
  double operator()(const Point& x) const override {
    double s = 0.0;
    for (int i = 0; i < x.dim(); ++i) {
      const double u = x[i] * inv_spacing_;
      const double d = u - std::nearbyint(u);
      s += d * d;
    }
    return s <= r2_ ? 1.0 : 0.0;
  }

 private:
  double r2_;  // squared radius in lattice units
  double inv_spacing_;
};

class SparseClusterSource final : public FieldSource {
 public:
  explicit SparseClusterSource(int clusters) : clusters_(clusters) {}
  double operator()(const Point& x) const override {
    for (int n = 1; n <= clusters_; ++n) {
      const double dx = x[0] - static_cast<double>(n) * n;
      if (dx * dx + x[1] * x[1] <= static_cast<double>(n) * n) return 1.0;
    }
    return 0.0;
  }

 private:
  int clusters_;
};

class AnalyticSource final : public FieldSource {
 public:
  explicit AnalyticSource(std::function<double(const Point&)> rule) : rule_(std::move(rule)) {}
  double operator()(const Point& x) const override { return std::clamp(rule_(x), 0.0, 1.0); }

 private:
  std::function<double(const Point&)> rule_;
};

class GridSource final : public FieldSource {
 public:
  explicit GridSource(GridRaster r) : r_(std::move(r)) {}
  double operator()(const Point& x) const override {
    const double u = (x[0] - r_.x0) / r_.dx;
    const double v = (x[1] - r_.y0) / r_.dy;
    if (!(u >= 0.0 && v >= 0.0 && u < r_.nx && v < r_.ny)) return 0.0;
    const auto i = static_cast<std::size_t>(u);
    const auto j = static_cast<std::size_t>(v);
    return r_.values[j * static_cast<std::size_t>(r_.nx) + i];
  }

 private:
  GridRaster r_;
};

Point uniform_point(int dim, double v) {
  Point p = Point::zero(dim);
  for (int i = 0; i < dim; ++i) p[i] = v;
  return p;
}

}  // namespace

DensityField constant_field(int dim, double value) {
  if (!(value >= 0.0 && value <= 1.0)) throw std::invalid_argument("constant field outside [0,1]");
  std::ostringstream d;
  d << "constant(" << value << ")";
  return DensityField(dim, FieldKind::constant, std::make_shared<ConstantSource>(value), value,
                      uniform_point(dim, 1.0), d.str());
}

DensityField ball_indicator_field(const Ball& ball) {
  make_ball(ball.center, ball.radius);
  return DensityField(ball.center.dim(), FieldKind::indicator_pattern,
                      std::make_shared<BallIndicatorSource>(ball), 1.0, std::nullopt,
                      "indicator(" + region_label(ball) + ")");
}

DensityField half_space_field(int dim, int axis) {
  check_dim(dim);
  if (axis < 0 || axis >= dim) throw std::invalid_argument("half_space_field: bad axis");
  return DensityField(dim, FieldKind::indicator_pattern, std::make_shared<HalfSpaceSource>(axis),
                      1.0, std::nullopt, "half-space(x" + std::to_string(axis) + ">0)");
}

DensityField stripe_field(double period, double fraction) {
  if (!(period > 0.0)) throw std::invalid_argument("stripe_field: period must be > 0");
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw std::invalid_argument("stripe_field: fraction must lie in (0, 1)");
  }
  std::ostringstream d;
  d << "stripes(period=" << period << ",fraction=" << fraction << ")";
  return DensityField(2, FieldKind::indicator_pattern,
                      std::make_shared<StripeSource>(period, fraction), 1.0,
                      Point{period, period}, d.str());
}

DensityField disk_lattice_field(int dim, double radius, double spacing) {
  check_dim(dim);
  if (!(spacing > 0.0)) throw std::invalid_argument("disk_lattice_field: spacing must be > 0");
  if (!(radius > 0.0 && radius < 0.5 * spacing)) {
    throw std::invalid_argument("disk_lattice_field: radius must lie in (0, spacing/2)");
  }
  std::ostringstream d;
  d << "disk-lattice(radius=" << radius << ",spacing=" << spacing << ")";
  return DensityField(dim, FieldKind::periodic_disk_lattice,
                      std::make_shared<DiskLatticeSource>(radius, spacing), 1.0,
                      uniform_point(dim, spacing), d.str());
}

DensityField sparse_cluster_field(int clusters) {
  if (clusters < 1) throw std::invalid_argument("sparse_cluster_field: need >= 1 cluster");
  return DensityField(2, FieldKind::sparse_cluster,
                      std::make_shared<SparseClusterSource>(clusters), 1.0, std::nullopt,
                      "sparse-cluster(n=" + std::to_string(clusters) + ")");
}

DensityField analytic_field(int dim, std::function<double(const Point&)> rule, double upper_bound,
                            std::string description, std::optional<Point> period) {
  if (!rule) throw std::invalid_argument("analytic_field: empty rule");
  return DensityField(dim, FieldKind::analytic, std::make_shared<AnalyticSource>(std::move(rule)),
                      std::clamp(upper_bound, 0.0, 1.0), std::move(period),
                      std::move(description));
}

DensityField grid_field(GridRaster raster) {
  if (raster.nx < 1 || raster.ny < 1) throw ConfigError("grid raster: nx and ny must be >= 1");
  if (!(raster.dx > 0.0 && raster.dy > 0.0)) throw ConfigError("grid raster: dx, dy must be > 0");
  if (raster.values.size() != static_cast<std::size_t>(raster.nx) * raster.ny) {
    throw ConfigError("grid raster: expected " + std::to_string(raster.nx * raster.ny) +
                      " values, got " + std::to_string(raster.values.size()));
  }
  double top = 0.0;
  for (double v : raster.values) {
    if (!(v >= 0.0 && v <= 1.0)) throw ConfigError("grid raster: value outside [0, 1]");
    top = std::max(top, v);
  }
  std::ostringstream d;
  d << "user-grid(" << raster.nx << "x" << raster.ny << ")";
  return DensityField(2, FieldKind::user_grid, std::make_shared<GridSource>(std::move(raster)),
                      top, std::nullopt, d.str());
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string{} : cell.substr(b, e - b + 1));
  }
  return out;
}

std::optional<double> parse_number(const std::string& s) {
  if (s.empty()) return std::nullopt;
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace

GridRaster parse_grid_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::vector<std::vector<double>> rows;
  bool header_names_seen = false;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto cells = split_csv_line(line);
    std::vector<double> nums;
    bool numeric = true;
    for (const auto& c : cells) {
      auto v = parse_number(c);
      if (!v) {
        numeric = false;
        break;
      }
      nums.push_back(*v);
    }
    if (!numeric) {
      if (rows.empty() && !header_names_seen) {
        header_names_seen = true;
        continue;
      }
      throw ConfigError("grid csv: non-numeric row: " + line);
    }
    rows.push_back(std::move(nums));
  }
  if (rows.empty() || rows.front().size() != 7) {
    throw ConfigError("grid csv: header must hold D,nx,ny,x0,y0,dx,dy");
  }
  const auto& h = rows.front();
  if (h[0] != 2.0) throw ConfigError("grid csv: only D = 2 rasters are supported");
  GridRaster r;
  r.nx = static_cast<int>(h[1]);
  r.ny = static_cast<int>(h[2]);
  if (r.nx != h[1] || r.ny != h[2]) throw ConfigError("grid csv: nx, ny must be integers");
  r.x0 = h[3];
  r.y0 = h[4];
  r.dx = h[5];
  r.dy = h[6];
  for (std::size_t i = 1; i < rows.size(); ++i) {
    r.values.insert(r.values.end(), rows[i].begin(), rows[i].end());
  }
  return r;
}

DensityField load_grid_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open grid csv: " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return grid_field(parse_grid_csv(buf.str()));
}

// ---------------------------------------------------------------------------
// Quadrature

void QuadratureConfig::validate() const {
  if (radial < 4 || angular < 4) throw std::invalid_argument("quadrature: subdivisions must be >= 4");
  if (!(cell > 0.0)) throw std::invalid_argument("quadrature: cell must be > 0");
  if (max_levels < 1) throw std::invalid_argument("quadrature: max_levels must be >= 1");
  if (!(abs_tol > 0.0) || rel_tol < 0.0) {
    throw std::invalid_argument("quadrature: tolerance must be > 0");
  }
}

double QuadratureConfig::tolerance(int dim, double t) const {
  return abs_tol + rel_tol * ball_volume(dim, t);
}

MassProfile::MassProfile(int dim, Point center, double t_max, std::vector<double> fine_cumulative,
                         std::vector<double> coarse_cumulative, int level)
    : dim_(dim),
      center_(std::move(center)),
      t_max_(t_max),
      fine_(std::move(fine_cumulative)),
      coarse_(std::move(coarse_cumulative)),
      level_(level) {}

double MassProfile::interpolate(std::span<const double> cum, int dim, double t_max, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("mass profile: radius must be positive");
  if (t > t_max * (1.0 + 1e-12)) {
    throw std::out_of_range("mass profile: radius beyond profile extent");
  }
  const auto n = cum.size();
  const double width = t_max / static_cast<double>(n);
  auto k = static_cast<std::size_t>(t / width);
  if (k >= n) return cum[n - 1];
  const double inner = k > 0 ? cum[k - 1] : 0.0;
  const double s_in = static_cast<double>(k) * width;
  const double s_out = s_in + width;
  const double frac = (std::pow(t, dim) - std::pow(s_in, dim)) /
                      (std::pow(s_out, dim) - std::pow(s_in, dim));
  return inner + (cum[k] - inner) * frac;
}

double MassProfile::mass(double t) const { return interpolate(fine_, dim_, t_max_, t); }

double MassProfile::error(double t) const {
  return std::abs(mass(t) - interpolate(coarse_, dim_, t_max_, t));
}

namespace {

constexpr double kPi = std::numbers::pi;

// Mass of shell [s_in, s_out) around c: midpoint rule, equal-measure cells.
double shell_mass(const DensityField& field, const Point& c, double s_in, double s_out,
                  double width, int angular_min) {
  const int dim = field.dim();
  const double s = 0.5 * (s_in + s_out);
  if (dim == 1) {
    Point p = c;
    p[0] = c[0] + s;
    double acc = field(p);
    p[0] = c[0] - s;
    acc += field(p);
    return acc * (s_out - s_in);
  }
  if (dim == 2) {
    const int n = std::max(angular_min, static_cast<int>(std::ceil(2.0 * kPi * s / width)));
    const double area = kPi * (s_out * s_out - s_in * s_in);
    const double step = 2.0 * kPi / n;
    const std::complex<double> rot = std::polar(1.0, step);
    std::complex<double> dir = std::polar(1.0, 0.5 * step);
    double acc = 0.0;
    Point p = c;
    for (int j = 0; j < n; ++j) {
      p[0] = c[0] + s * dir.real();
      p[1] = c[1] + s * dir.imag();
      acc += field(p);
      dir *= rot;
      if ((j & 63) == 63) dir /= std::abs(dir);
    }
    return acc * area / n;
  }
  // dim == 3: equal-area bands in u = cos(theta).
  const int n_phi = std::max(angular_min, static_cast<int>(std::ceil(2.0 * kPi * s / width)));
  const int n_u = std::max(angular_min / 2, static_cast<int>(std::ceil(2.0 * s / width)));
  const double volume = 4.0 * kPi / 3.0 * (std::pow(s_out, 3) - std::pow(s_in, 3));
  const double step = 2.0 * kPi / n_phi;
  double acc = 0.0;
  Point p = c;
  for (int k = 0; k < n_u; ++k) {
    const double u = -1.0 + (k + 0.5) * 2.0 / n_u;
    const double rho = s * std::sqrt(std::max(0.0, 1.0 - u * u));
    p[2] = c[2] + s * u;
    for (int j = 0; j < n_phi; ++j) {
      const double phi = (j + 0.5) * step;
      p[0] = c[0] + rho * std::cos(phi);
      p[1] = c[1] + rho * std::sin(phi);
      acc += field(p);
    }
  }
  return acc * volume / (static_cast<double>(n_u) * n_phi);
}

std::vector<double> profile_level(const DensityField& field, const Point& center, double t_max,
                                  const QuadratureConfig& q, int level) {
  const double base = std::min(q.cell, t_max / q.radial);
  const auto n0 = static_cast<std::size_t>(std::ceil(t_max / base - 1e-9));
  const std::size_t n = std::max<std::size_t>(n0, 1) << level;
  const double width = t_max / static_cast<double>(n);
  const int angular_min = q.angular << level;
  std::vector<double> shells(n);
  parallel_for(n, [&](std::size_t i) {
    const double s_in = static_cast<double>(i) * width;
    shells[i] = shell_mass(field, center, s_in, s_in + width, width, angular_min);
  });
  for (std::size_t i = 1; i < n; ++i) shells[i] += shells[i - 1];
  return shells;
}

}  // namespace

MassProfile ball_mass_profile(const DensityField& field, const Point& center, double t_max,
                              std::span<const double> probes, const QuadratureConfig& q) {
  q.validate();
  check_same_dim(center, Point::zero(field.dim()));
  if (!(t_max > 0.0)) throw std::invalid_argument("ball_mass_profile: t_max must be > 0");
  std::vector<double> checks{t_max};
  for (double t : probes) {
    if (t > 0.0 && t < t_max) checks.push_back(t);
  }
  const int dim = field.dim();
  std::vector<double> coarse = profile_level(field, center, t_max, q, 0);
  double worst = 0.0;
  double worst_t = t_max;
  for (int level = 1; level <= q.max_levels; ++level) {
    std::vector<double> fine = profile_level(field, center, t_max, q, level);
    MassProfile candidate(dim, center, t_max, std::move(fine), std::move(coarse), level);
    bool ok = true;
    worst = 0.0;
    for (double t : checks) {
      const double diff = candidate.error(t);
      const double excess = diff / q.tolerance(dim, t);
      if (excess > 1.0) ok = false;
      if (excess > worst) {
        worst = excess;
        worst_t = t;
      }
    }
    if (ok) return candidate;
    if (level == q.max_levels) break;
    coarse.assign(candidate.shells().begin(), candidate.shells().end());
  }
  std::ostringstream msg;
  msg << "ball mass quadrature did not converge for " << field.description() << " (t_max=" << t_max
      << "): refinement difference " << worst << "x tolerance at t=" << worst_t << " after "
      << q.max_levels << " levels";
  throw ConvergenceError(msg.str());
}

MassEstimate ball_mass(const DensityField& field, const Point& center, double t,
                       const QuadratureConfig& q) {
  if (!(t > 0.0)) throw std::invalid_argument("ball_mass: radius must be positive");
  const auto profile = ball_mass_profile(field, center, t, {}, q);
  return {profile.mass(t), profile.error(t)};
}

namespace {

double box_level(const DensityField& field, const BoxRegion& box, const QuadratureConfig& q,
                 int level) {
  const int dim = field.dim();
  std::array<std::size_t, kMaxDim> n{1, 1, 1};
  std::array<double, kMaxDim> h{1.0, 1.0, 1.0};
  double cell_volume = 1.0;
  for (int i = 0; i < dim; ++i) {
    const double len = box.hi[i] - box.lo[i];
    const auto base = static_cast<std::size_t>(std::max(4.0, std::ceil(len / q.cell - 1e-9)));
    n[i] = base << level;
    h[i] = len / static_cast<double>(n[i]);
    cell_volume *= h[i];
  }
  std::vector<double> slabs(n[0]);
  parallel_for(n[0], [&](std::size_t i) {
    Point p = box.lo;
    p[0] = box.lo[0] + (static_cast<double>(i) + 0.5) * h[0];
    double acc = 0.0;
    for (std::size_t j = 0; j < n[1]; ++j) {
      if (dim > 1) p[1] = box.lo[1] + (static_cast<double>(j) + 0.5) * h[1];
      for (std::size_t k = 0; k < n[2]; ++k) {
        if (dim > 2) p[2] = box.lo[2] + (static_cast<double>(k) + 0.5) * h[2];
        acc += field(p);
      }
    }
    slabs[i] = acc;
  });
  double total = 0.0;
  for (double s : slabs) total += s;
  return total * cell_volume;
}

}  // namespace

MassEstimate box_mass(const DensityField& field, const BoxRegion& box, const QuadratureConfig& q) {
  q.validate();
  check_same_dim(box.lo, Point::zero(field.dim()));
  const double tol = q.abs_tol + q.rel_tol * region_volume(box);
  double coarse = box_level(field, box, q, 0);
  double diff = 0.0;
  for (int level = 1; level <= q.max_levels; ++level) {
    const double fine = box_level(field, box, q, level);
    diff = std::abs(fine - coarse);
    if (diff <= tol) return {fine, diff};
    coarse = fine;
  }
  std::ostringstream msg;
  msg << "box mass quadrature did not converge for " << field.description() << " on "
      << region_label(box) << ": difference " << diff << " > tolerance " << tol;
  throw ConvergenceError(msg.str());
}

MassEstimate region_mass(const DensityField& field, const Region& region,
                         const QuadratureConfig& q) {
  if (const auto* b = std::get_if<Ball>(&region)) return ball_mass(field, b->center, b->radius, q);
  return box_mass(field, std::get<BoxRegion>(region), q);
}

// ---------------------------------------------------------------------------
// Translate search

void TranslateSearchConfig::validate() const {
  check_dim(lo.dim());
  check_same_dim(lo, hi);
  if (!(spacing > 0.0)) throw std::invalid_argument("translate search: spacing must be > 0");
  if (refine_passes < 0) throw std::invalid_argument("translate search: refine_passes < 0");
  for (int i = 0; i < lo.dim(); ++i) {
    if (!(lo[i] < hi[i])) throw std::invalid_argument("translate search: degenerate box");
  }
}

std::vector<Point> TranslateSearchConfig::grid() const {
  validate();
  const int dim = lo.dim();
  std::array<int, kMaxDim> n{1, 1, 1};
  for (int i = 0; i < dim; ++i) {
    n[i] = static_cast<int>(std::floor((hi[i] - lo[i]) / spacing + 1e-9)) + 1;
  }
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(n[0]) * n[1] * n[2]);
  for (int i = 0; i < n[0]; ++i) {
    for (int j = 0; j < n[1]; ++j) {
      for (int k = 0; k < n[2]; ++k) {
        Point p = lo;
        p[0] = lo[0] + i * spacing;
        if (dim > 1) p[1] = lo[1] + j * spacing;
        if (dim > 2) p[2] = lo[2] + k * spacing;
        pts.push_back(p);
      }
    }
  }
  return pts;
}

TranslateSearchConfig default_search(const DensityField& field, double spacing) {
  if (!field.period()) {
    throw std::invalid_argument("default_search: field '" + field.description() +
                                "' is not periodic; supply a search box");
  }
  TranslateSearchConfig s;
  s.lo = Point::zero(field.dim());
  s.hi = *field.period();
  s.spacing = spacing;
  return s;
}

TranslateSearchConfig box_search(const Point& center, double half_width, double spacing) {
  TranslateSearchConfig s;
  s.lo = center;
  s.hi = center;
  for (int i = 0; i < center.dim(); ++i) {
    s.lo[i] -= half_width;
    s.hi[i] += half_width;
  }
  s.spacing = spacing;
  s.validate();
  return s;
}

SearchOutcome maximize_over_translates(const TranslateSearchConfig& search,
                                       const std::function<MassEstimate(const Point&)>& objective) {
  const auto pts = search.grid();
  SearchOutcome best;
  best.value = -std::numeric_limits<double>::infinity();
  for (const auto& p : pts) {
    const auto v = objective(p);
    ++best.evaluations;
    if (v.value > best.value) {
      best.value = v.value;
      best.argmax = p;
      best.quadrature_error = v.error;
    }
  }
  const int dim = search.lo.dim();
  // Offsets of the 3^D - 1 neighbours in fixed order.
  std::vector<std::array<int, kMaxDim>> offsets;
  for (int i = -1; i <= 1; ++i) {
    for (int j = (dim > 1 ? -1 : 0); j <= (dim > 1 ? 1 : 0); ++j) {
      for (int k = (dim > 2 ? -1 : 0); k <= (dim > 2 ? 1 : 0); ++k) {
        if (i == 0 && j == 0 && k == 0) continue;
        offsets.push_back({i, j, k});
      }
    }
  }
  double step = search.spacing;
  for (int pass = 0; pass < search.refine_passes; ++pass) {
    step *= 0.5;
    for (int moves = 0; moves < 8; ++moves) {
      SearchOutcome candidate = best;
      for (const auto& o : offsets) {
        Point p = best.argmax;
        for (int d = 0; d < dim; ++d) {
          p[d] = std::clamp(p[d] + o[static_cast<std::size_t>(d)] * step, search.lo[d],
                            search.hi[d]);
        }
        if (p == best.argmax) continue;
        const auto v = objective(p);
        ++best.evaluations;
        if (v.value > candidate.value) {
          candidate.value = v.value;
          candidate.argmax = p;
          candidate.quadrature_error = v.error;
        }
      }
      if (!(candidate.value > best.value)) break;
      candidate.evaluations = best.evaluations;
      best = candidate;
    }
  }
  return best;
}

SupEstimate sup_translate_ball_mass(const DensityField& field, double t,
                                    const TranslateSearchConfig& search,
                                    const QuadratureConfig& q) {
  if (!(t > 0.0)) throw std::invalid_argument("sup_translate_ball_mass: radius must be positive");
  search.validate();
  check_same_dim(search.lo, Point::zero(field.dim()));
  ProfileCache cache(field, t, {}, q);
  const auto grid = search.grid();
  cache.prefetch(grid);
  const auto outcome = maximize_over_translates(search, [&](const Point& a) {
    const auto& prof = cache.at(a);
    return MassEstimate{prof.mass(t), prof.error(t)};
  });
  SupEstimate out;
  out.value = outcome.value;
  out.argmax = outcome.argmax;
  out.quadrature_error = outcome.quadrature_error;
  out.error_bound = 2.0 * ball_surface_area(field.dim(), t) * search.spacing * field.upper_bound();
  return out;
}

ProfileCache::ProfileCache(DensityField field, double t_max, std::vector<double> probes,
                           QuadratureConfig q)
    : field_(std::move(field)), t_max_(t_max), probes_(std::move(probes)), q_(q) {
  q_.validate();
}

const MassProfile& ProfileCache::at(const Point& center) {
  auto it = cache_.find(center);
  if (it != cache_.end()) return it->second;
  auto prof = ball_mass_profile(field_, center, t_max_, probes_, q_);
  return cache_.emplace(center, std::move(prof)).first->second;
}

void ProfileCache::prefetch(std::span<const Point> centers) {
  std::vector<Point> missing;
  for (const auto& c : centers) {
    if (!cache_.contains(c)) missing.push_back(c);
  }
  std::sort(missing.begin(), missing.end());
  missing.erase(std::unique(missing.begin(), missing.end()), missing.end());
  std::vector<MassProfile> computed(missing.size());
  parallel_for(missing.size(), [&](std::size_t i) {
    computed[i] = ball_mass_profile(field_, missing[i], t_max_, probes_, q_);
  });
  for (std::size_t i = 0; i < missing.size(); ++i) {
    cache_.emplace(missing[i], std::move(computed[i]));
  }
}

}  // namespace edens
