#pragma once

#include <array>
#include <initializer_list>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace edens {

inline constexpr int kMaxDim = 3;

/// A point of R^D for D in {1, 2, 3}.
class Point {
 public:
  Point() = default;
  Point(std::initializer_list<double> coords);

  static Point zero(int dim);

  int dim() const { return dim_; }
  double operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
  double& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }

  Point operator+(const Point& o) const {
    Point p = *this;
    for (int i = 0; i < dim_; ++i) p[i] += o[i];
    return p;
  }
  Point operator-(const Point& o) const {
    Point p = *this;
    for (int i = 0; i < dim_; ++i) p[i] -= o[i];
    return p;
  }
  Point operator-() const { return zero(dim_) - *this; }
  Point operator*(double s) const {
    Point p = *this;
    for (int i = 0; i < dim_; ++i) p[i] *= s;
    return p;
  }

  double norm() const;
  bool operator==(const Point& o) const = default;
  auto operator<=>(const Point& o) const = default;

 private:
  std::array<double, kMaxDim> c_{};
  int dim_ = 0;
};

double distance(const Point& a, const Point& b);

/// Rejects dimensions outside {1, 2, 3}.
void check_dim(int dim);
void check_same_dim(const Point& a, const Point& b);

/// Closed ball B_r(a) = {x : |x - a| <= r}.
struct Ball {
  Point center;
  double radius = 1.0;
};

/// Axis-aligned box, closed intervals [lo_i, hi_i] with lo_i < hi_i.
struct BoxRegion {
  Point lo;
  Point hi;
};

using Region = std::variant<Ball, BoxRegion>;

Ball make_ball(const Point& center, double radius);
BoxRegion make_box(const Point& lo, const Point& hi);
/// The cube [0, side]^D.
BoxRegion make_cube(int dim, double side);

int region_dim(const Region& region);
double region_volume(const Region& region);
/// (D-1)-dimensional boundary measure; used for translation Lipschitz bounds.
double region_surface_area(const Region& region);
std::string region_label(const Region& region);

/// Lebesgue volume pi^{D/2} r^D / Gamma(D/2 + 1).
double ball_volume(int dim, double r);
double ball_surface_area(int dim, double r);

/// Volume of the r-boundary: points whose closed r-ball meets both the region
/// and its complement.  Exact for balls and boxes (Steiner formula for the
/// outer parallel body, face-wise shrinking for the inner one).
double r_boundary_volume(const Region& region, double r);

struct FolnerRow {
  std::string label;
  double volume = 0.0;
  double boundary_volume = 0.0;
  double ratio = 0.0;
};

struct FolnerDiagnostics {
  double probe_r = 0.0;
  std::vector<FolnerRow> rows;
  /// Ratios strictly decrease over the supplied prefix.
  bool consistent = false;
};

FolnerDiagnostics folner_diagnostics(std::span<const Region> sequence, double probe_r);

}  // namespace edens
