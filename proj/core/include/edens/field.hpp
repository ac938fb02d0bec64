#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "edens/geometry.hpp"

namespace edens {

enum class FieldKind {
  constant,
  indicator_pattern,
  periodic_disk_lattice,
  sparse_cluster,
  curve_energy,
  user_grid,
  analytic,
};

std::string_view to_string(FieldKind kind);

/// Evaluation rule of a density.  Implementations must be thread-safe and
/// return values in [0, 1].
class FieldSource {
 public:
  virtual ~FieldSource() = default;
  virtual double operator()(const Point& x) const = 0;
};

/// A measurable phi: R^D -> [0, 1], standing in for the measure
/// mu(Omega) = int_Omega phi dvol.  Immutable; copies share the source.
class DensityField {
 public:
  DensityField(int dim, FieldKind kind, std::shared_ptr<const FieldSource> source,
               double upper_bound, std::optional<Point> period = std::nullopt,
               std::string description = {});

  /// phi(offset + x); offset is the accumulated translation.
  double operator()(const Point& x) const { return (*source_)(offset_ + x); }

  int dim() const { return dim_; }
  FieldKind kind() const { return kind_; }
  double upper_bound() const { return upper_bound_; }
  const std::optional<Point>& period() const { return period_; }
  const Point& offset() const { return offset_; }
  const std::string& description() const { return description_; }
  const FieldSource& source() const { return *source_; }

  friend DensityField translate(const DensityField& field, const Point& a);

 private:
  int dim_;
  FieldKind kind_;
  std::shared_ptr<const FieldSource> source_;
  double upper_bound_;
  std::optional<Point> period_;
  std::string description_;
  Point offset_;
};

/// The translate a.mu: evaluates at x to phi(a + x), so mass moves to -a.
DensityField translate(const DensityField& field, const Point& a);

DensityField constant_field(int dim, double value);
DensityField ball_indicator_field(const Ball& ball);
/// Indicator of {x : x_axis > 0}.
DensityField half_space_field(int dim, int axis = 0);
/// 2-D stripes: 1 where frac(x / period) < fraction.
DensityField stripe_field(double period, double fraction);
/// Balls of the given radius centred on the lattice spacing * Z^D.
DensityField disk_lattice_field(int dim, double radius, double spacing = 1.0);
/// 2-D indicator of the union of discs |x - (a_n, 0)| <= n, a_n = n^2, n = 1..clusters.
DensityField sparse_cluster_field(int clusters);
/// Wraps an arbitrary rule; values are clamped to [0, 1].
DensityField analytic_field(int dim, std::function<double(const Point&)> rule, double upper_bound,
                            std::string description, std::optional<Point> period = std::nullopt);

/// Piecewise-constant raster on cells [x0 + i dx, x0 + (i+1) dx) x [y0 + j dy, ...).
/// Values outside the raster evaluate to 0.
struct GridRaster {
  int nx = 0;
  int ny = 0;
  double x0 = 0.0;
  double y0 = 0.0;
  double dx = 1.0;
  double dy = 1.0;
  std::vector<double> values;  // row-major, row j holds nx values
};

DensityField grid_field(GridRaster raster);
/// CSV raster: header row "D,nx,ny,x0,y0,dx,dy" (a preceding row of names is
/// allowed), then ny rows of nx values in [0, 1].
DensityField load_grid_csv(const std::filesystem::path& path);
GridRaster parse_grid_csv(std::string_view text);

/// Midpoint rule on concentric shells around the ball centre.  The radial
/// width and the angular cell size both start at min(cell, t_max / radial)
/// and halve each level; refinement stops once two successive levels differ
/// by at most abs_tol + rel_tol * |B_t| at every probed radius.
struct QuadratureConfig {
  int radial = 8;
  int angular = 16;
  double cell = 0.05;
  int max_levels = 8;
  double abs_tol = 1e-6;
  double rel_tol = 0.0;

  void validate() const;
  double tolerance(int dim, double t) const;
};

/// Masses of every ball B_t(center), 0 < t <= t_max, from one polar grid.
class MassProfile {
 public:
  MassProfile() = default;
  MassProfile(int dim, Point center, double t_max, std::vector<double> fine_cumulative,
              std::vector<double> coarse_cumulative, int level);

  double mass(double t) const;
  /// |fine - coarse| between the last two refinement levels.
  double error(double t) const;
  double t_max() const { return t_max_; }
  const Point& center() const { return center_; }
  int level() const { return level_; }
  int dim() const { return dim_; }

  /// Cumulative masses at the outer radius of each shell of the fine level.
  std::span<const double> shells() const { return fine_; }

 private:
  static double interpolate(std::span<const double> cumulative, int dim, double t_max, double t);

  int dim_ = 0;
  Point center_;
  double t_max_ = 0.0;
  std::vector<double> fine_;
  std::vector<double> coarse_;
  int level_ = 0;
};

/// Converged profile; probes are the radii at which convergence is checked
/// (t_max is always probed).  Throws ConvergenceError after max_levels.
MassProfile ball_mass_profile(const DensityField& field, const Point& center, double t_max,
                              std::span<const double> probes, const QuadratureConfig& q);

struct MassEstimate {
  double value = 0.0;
  double error = 0.0;
};

MassEstimate ball_mass(const DensityField& field, const Point& center, double t,
                       const QuadratureConfig& q);
/// Midpoint rule on a Cartesian grid over the box.
MassEstimate box_mass(const DensityField& field, const BoxRegion& box, const QuadratureConfig& q);
MassEstimate region_mass(const DensityField& field, const Region& region,
                         const QuadratureConfig& q);

/// Grid of translates over [lo, hi] with the given spacing, followed by
/// pattern-search refinement around the best grid point.
struct TranslateSearchConfig {
  Point lo;
  Point hi;
  double spacing = 0.1;
  int refine_passes = 2;

  void validate() const;
  std::vector<Point> grid() const;
};

/// One fundamental domain [0, period) with the given spacing.  Throws for
/// non-periodic fields.
TranslateSearchConfig default_search(const DensityField& field, double spacing = 0.1);
/// Box [center - half_width, center + half_width]^D.
TranslateSearchConfig box_search(const Point& center, double half_width, double spacing);

struct SearchOutcome {
  double value = 0.0;
  Point argmax;
  double quadrature_error = 0.0;
  int evaluations = 0;
};

/// Maximizes an objective over translates.  objective(a) returns a value and
/// its quadrature error; it is invoked at every grid point, then along a
/// pattern search whose step halves each pass.
SearchOutcome maximize_over_translates(
    const TranslateSearchConfig& search,
    const std::function<MassEstimate(const Point&)>& objective);

struct SupEstimate {
  double value = 0.0;
  Point argmax;
  /// Lipschitz bound 2 |S_t| h sup(phi) on how far the true sup over the box
  /// can exceed the reported value.
  double error_bound = 0.0;
  double quadrature_error = 0.0;
};

SupEstimate sup_translate_ball_mass(const DensityField& field, double t,
                                    const TranslateSearchConfig& search,
                                    const QuadratureConfig& q);

/// Memoizes converged profiles by centre.  Not thread-safe.
class ProfileCache {
 public:
  ProfileCache(DensityField field, double t_max, std::vector<double> probes, QuadratureConfig q);

  const MassProfile& at(const Point& center);
  /// Computes any missing profiles for the given centres (in parallel).
  void prefetch(std::span<const Point> centers);

  const DensityField& field() const { return field_; }
  double t_max() const { return t_max_; }
  std::size_t size() const { return cache_.size(); }

 private:
  DensityField field_;
  double t_max_;
  std::vector<double> probes_;
  QuadratureConfig q_;
  std::map<Point, MassProfile> cache_;
};

}  // namespace edens
