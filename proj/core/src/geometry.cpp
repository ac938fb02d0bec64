#include "edens/geometry.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace edens {

Point::Point(std::initializer_list<double> coords) : dim_(static_cast<int>(coords.size())) {
  check_dim(dim_);
  std::size_t i = 0;
  for (double v : coords) c_[i++] = v;
}

Point Point::zero(int dim) {
  check_dim(dim);
  Point p;
  p.dim_ = dim;
  return p;
}

double Point::norm() const {
  double s = 0.0;
  for (int i = 0; i < dim_; ++i) s += c_[i] * c_[i];
  return std::sqrt(s);
}

double distance(const Point& a, const Point& b) {
  check_same_dim(a, b);
  return (a - b).norm();
}

void check_dim(int dim) {
  if (dim < 1 || dim > kMaxDim) {
    throw std::invalid_argument("dimension " + std::to_string(dim) + " not in {1,2,3}");
  }
}

void check_same_dim(const Point& a, const Point& b) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                                std::to_string(b.dim()));
  }
}

Ball make_ball(const Point& center, double radius) {
  check_dim(center.dim());
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw std::invalid_argument("ball radius must be positive and finite");
  }
  return Ball{center, radius};
}

BoxRegion make_box(const Point& lo, const Point& hi) {
  check_dim(lo.dim());
  check_same_dim(lo, hi);
  for (int i = 0; i < lo.dim(); ++i) {
    if (!(lo[i] < hi[i])) throw std::invalid_argument("box requires lo < hi on every axis");
  }
  return BoxRegion{lo, hi};
}

BoxRegion make_cube(int dim, double side) {
  Point hi = Point::zero(dim);
  for (int i = 0; i < dim; ++i) hi[i] = side;
  return make_box(Point::zero(dim), hi);
}

namespace {

// Volume of the unit k-ball, k = 0..3.
double unit_ball(int k) {
  constexpr double pi = std::numbers::pi;
  switch (k) {
    case 0: return 1.0;
    case 1: return 2.0;
    case 2: return pi;
    case 3: return 4.0 * pi / 3.0;
    default: throw std::invalid_argument("unit_ball: unsupported k");
  }
}

// Elementary symmetric polynomial e_k of the side lengths.
double elementary_symmetric(const std::array<double, kMaxDim>& x, int n, int k) {
  std::array<double, kMaxDim + 1> e{1.0, 0.0, 0.0, 0.0};
  for (int i = 0; i < n; ++i) {
    for (int j = std::min(k, i + 1); j >= 1; --j) e[j] += e[j - 1] * x[i];
  }
  return e[k];
}

std::array<double, kMaxDim> sides(const BoxRegion& box) {
  std::array<double, kMaxDim> s{};
  for (int i = 0; i < box.lo.dim(); ++i) s[i] = box.hi[i] - box.lo[i];
  return s;
}

}  // namespace

double ball_volume(int dim, double r) {
  check_dim(dim);
  if (!(r > 0.0)) throw std::invalid_argument("ball_volume: radius must be positive");
  return unit_ball(dim) * std::pow(r, dim);
}

double ball_surface_area(int dim, double r) {
  check_dim(dim);
  if (!(r > 0.0)) throw std::invalid_argument("ball_surface_area: radius must be positive");
  return dim * unit_ball(dim) * std::pow(r, dim - 1);
}

int region_dim(const Region& region) {
  return std::visit(
      [](const auto& r) {
        if constexpr (std::is_same_v<std::decay_t<decltype(r)>, Ball>) {
          return r.center.dim();
        } else {
          return r.lo.dim();
        }
      },
      region);
}

double region_volume(const Region& region) {
  if (const auto* b = std::get_if<Ball>(&region)) return ball_volume(b->center.dim(), b->radius);
  const auto& box = std::get<BoxRegion>(region);
  auto s = sides(box);
  double v = 1.0;
  for (int i = 0; i < box.lo.dim(); ++i) v *= s[i];
  return v;
}

double region_surface_area(const Region& region) {
  if (const auto* b = std::get_if<Ball>(&region)) {
    return ball_surface_area(b->center.dim(), b->radius);
  }
  const auto& box = std::get<BoxRegion>(region);
  const int d = box.lo.dim();
  // d/dr of the Steiner polynomial at r = 0.
  return unit_ball(1) * elementary_symmetric(sides(box), d, d - 1);
}

std::string region_label(const Region& region) {
  std::ostringstream out;
  out.precision(6);
  if (const auto* b = std::get_if<Ball>(&region)) {
    out << "ball(r=" << b->radius << ")";
  } else {
    const auto& box = std::get<BoxRegion>(region);
    out << "box[";
    for (int i = 0; i < box.lo.dim(); ++i) {
      if (i) out << "x";
      out << box.lo[i] << "," << box.hi[i];
    }
    out << "]";
  }
  return out.str();
}

double r_boundary_volume(const Region& region, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("r_boundary_volume: r must be positive");
  if (const auto* b = std::get_if<Ball>(&region)) {
    const int d = b->center.dim();
    const double outer = ball_volume(d, b->radius + r);
    if (b->radius <= r) return outer;
    return outer - ball_volume(d, b->radius - r);
  }
  const auto& box = std::get<BoxRegion>(region);
  const int d = box.lo.dim();
  const auto s = sides(box);
  double outer = 0.0;
  for (int k = 0; k <= d; ++k) {
    outer += unit_ball(k) * std::pow(r, k) * elementary_symmetric(s, d, d - k);
  }
  double inner = 1.0;
  for (int i = 0; i < d; ++i) inner *= std::max(s[i] - 2.0 * r, 0.0);
  return outer - inner;
}

FolnerDiagnostics folner_diagnostics(std::span<const Region> sequence, double probe_r) {
  if (sequence.empty()) throw std::invalid_argument("folner_diagnostics: empty sequence");
  FolnerDiagnostics diag;
  diag.probe_r = probe_r;
  for (const auto& region : sequence) {
    FolnerRow row;
    row.label = region_label(region);
    row.volume = region_volume(region);
    row.boundary_volume = r_boundary_volume(region, probe_r);
    row.ratio = row.boundary_volume / row.volume;
    diag.rows.push_back(std::move(row));
  }
  diag.consistent = true;
  for (std::size_t i = 1; i < diag.rows.size(); ++i) {
    if (!(diag.rows[i].ratio < diag.rows[i - 1].ratio)) diag.consistent = false;
  }
  // A single region shows no decrease.
  if (diag.rows.size() < 2) diag.consistent = false;
  return diag;
}

}  // namespace edens
