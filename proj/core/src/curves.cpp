#include "edens/curves.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "edens/error.hpp"
#include "edens/parallel.hpp"

namespace edens {

// ---------------------------------------------------------------------------
// Polynomials

Polynomial::Polynomial(std::vector<Complex> ascending) : coeffs_(std::move(ascending)) {
  while (!coeffs_.empty() && coeffs_.back() == Complex{}) coeffs_.pop_back();
}

Complex Polynomial::operator()(Complex z) const {
  Complex acc{};
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() <= 1) return Polynomial{};
  std::vector<Complex> d(coeffs_.size() - 1);
  for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = coeffs_[k] * static_cast<double>(k);
  return Polynomial(std::move(d));
}

Complex resultant(const Polynomial& p, const Polynomial& q) {
  const int m = p.degree();
  const int n = q.degree();
  if (m < 0 || n < 0) return Complex{};
  if (m == 0) return std::pow(p.coefficients()[0], n);
  if (n == 0) return std::pow(q.coefficients()[0], m);
  const int size = m + n;
  std::vector<Complex> a(static_cast<std::size_t>(size) * size);
  auto at = [&](int r, int c) -> Complex& { return a[static_cast<std::size_t>(r) * size + c]; };
  // Rows hold descending coefficients, shifted.
  for (int r = 0; r < n; ++r) {
    for (int k = 0; k <= m; ++k) at(r, r + k) = p.coefficients()[static_cast<std::size_t>(m - k)];
  }
  for (int r = 0; r < m; ++r) {
    for (int k = 0; k <= n; ++k) at(n + r, r + k) = q.coefficients()[static_cast<std::size_t>(n - k)];
  }
  Complex det{1.0, 0.0};
  for (int col = 0; col < size; ++col) {
    int pivot = col;
    for (int r = col + 1; r < size; ++r) {
      if (std::abs(at(r, col)) > std::abs(at(pivot, col))) pivot = r;
    }
    if (std::abs(at(pivot, col)) == 0.0) return Complex{};
    if (pivot != col) {
      for (int c = 0; c < size; ++c) std::swap(at(pivot, c), at(col, c));
      det = -det;
    }
    det *= at(col, col);
    for (int r = col + 1; r < size; ++r) {
      const Complex factor = at(r, col) / at(col, col);
      for (int c = col; c < size; ++c) at(r, c) -= factor * at(col, c);
    }
  }
  return det;
}

namespace {

double coeff_norm(const Polynomial& p) {
  double s = 0.0;
  for (const auto& c : p.coefficients()) s += std::norm(c);
  return std::sqrt(s);
}

}  // namespace

// ---------------------------------------------------------------------------
// Rational curves

RationalCurve::RationalCurve(Polynomial numerator, Polynomial denominator)
    : p_(std::move(numerator)), q_(std::move(denominator)) {
  if (q_.is_zero()) throw std::invalid_argument("rational curve: denominator is identically zero");
  if (p_.degree() > 0 && q_.degree() > 0) {
    const double scale =
        std::pow(coeff_norm(p_), q_.degree()) * std::pow(coeff_norm(q_), p_.degree());
    if (std::abs(resultant(p_, q_)) <= 1e-10 * scale) {
      throw std::invalid_argument("rational curve: numerator and denominator share a root");
    }
  }
  dp_ = p_.derivative();
  dq_ = q_.derivative();
}

Complex RationalCurve::value(Complex z) const {
  const Complex q = q_(z);
  if (q == Complex{}) return {std::numeric_limits<double>::infinity(), 0.0};
  return p_(z) / q;
}

double RationalCurve::spherical_derivative(Complex z) const {
  const Complex p = p_(z);
  const Complex q = q_(z);
  const double denom = std::norm(p) + std::norm(q);
  if (denom == 0.0) return 0.0;  // only for the zero map
  return std::abs(dp_(z) * q - p * dq_(z)) / denom;
}

namespace {

std::string poly_string(const Polynomial& p) {
  if (p.is_zero()) return "0";
  std::ostringstream out;
  out.precision(6);
  bool first = true;
  for (std::size_t k = 0; k < p.coefficients().size(); ++k) {
    const auto& c = p.coefficients()[k];
    if (c == Complex{}) continue;
    if (!first) out << " + ";
    first = false;
    if (c.imag() == 0.0) {
      out << c.real();
    } else {
      out << "(" << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i)";
    }
    if (k >= 1) out << "z";
    if (k >= 2) out << "^" << k;
  }
  return out.str();
}

}  // namespace

std::string RationalCurve::description() const {
  return "rational[(" + poly_string(p_) + ")/(" + poly_string(q_) + ")]";
}

// ---------------------------------------------------------------------------
// Cluster curves

double ClusterSpec::center(int n) const { return center_scale * std::pow(n, center_power); }

void ClusterSpec::validate() const {
  if (n_max < 1) throw std::invalid_argument("cluster spec: n_max must be >= 1");
  if (!(center_scale > 0.0) || !(center_power > 0.0)) {
    throw std::invalid_argument("cluster spec: center scale and power must be > 0");
  }
  for (int n = 1; n <= n_max; ++n) {
    if (!(center(n + 1) > center(n))) {
      throw std::invalid_argument("cluster spec: centers must increase");
    }
    if (center(n + 1) - radius(n + 1) < center(n) + radius(n) - 1e-9) {
      throw std::invalid_argument("cluster spec: clusters " + std::to_string(n) + " and " +
                                  std::to_string(n + 1) + " overlap");
    }
  }
}

ClusterCurve::ClusterCurve(ClusterSpec spec, double c, double drop_threshold)
    : spec_(spec), c_(c), threshold_(drop_threshold) {
  spec_.validate();
  if (!(c_ > 0.0) || !std::isfinite(c_)) throw std::invalid_argument("cluster curve: c must be > 0");
  if (!(threshold_ >= 0.0)) throw std::invalid_argument("cluster curve: threshold must be >= 0");
  valid_radius_ = spec_.center(spec_.n_max + 1) - spec_.radius(spec_.n_max + 1);
  for (int n = 1; n <= spec_.n_max; ++n) {
    const double a = spec_.center(n);
    const double r = spec_.radius(n);
    Cluster cl{a, r, xs_.size(), xs_.size()};
    const auto x_lo = static_cast<long>(std::ceil(a - r - 1e-9));
    const auto x_hi = static_cast<long>(std::floor(a + r + 1e-9));
    const auto y_hi = static_cast<long>(std::floor(r + 1e-9));
    for (long x = x_lo; x <= x_hi; ++x) {
      for (long y = -y_hi; y <= y_hi; ++y) {
        const double dx = static_cast<double>(x) - a;
        if (dx * dx + static_cast<double>(y * y) > r * r + 1e-9) continue;
        bool earlier = false;
        for (int m = 1; m < n && !earlier; ++m) {
          const double ex = static_cast<double>(x) - spec_.center(m);
          earlier = ex * ex + static_cast<double>(y * y) <= spec_.radius(m) * spec_.radius(m) + 1e-9;
        }
        if (earlier) continue;
        xs_.push_back(static_cast<double>(x));
        ys_.push_back(static_cast<double>(y));
      }
    }
    cl.end = xs_.size();
    clusters_.push_back(cl);
  }
}

bool ClusterCurve::in_lattice(long x, long y) const {
  for (const auto& cl : clusters_) {
    const double dx = static_cast<double>(x) - cl.center;
    if (dx * dx + static_cast<double>(y * y) <= cl.radius * cl.radius + 1e-9) return true;
  }
  return false;
}

ClusterCurve::Evaluation ClusterCurve::evaluate_w(Complex w, double threshold) const {
  if (!(std::abs(w) < valid_radius_)) {
    std::ostringstream msg;
    msg << "cluster curve: |w| = " << std::abs(w) << " outside the truncation region |w| < "
        << valid_radius_;
    throw std::domain_error(msg.str());
  }
  const double wx = w.real();
  const double wy = w.imag();
  const long nx = std::lround(wx);
  const long ny = std::lround(wy);
  const double ux0 = wx - static_cast<double>(nx);
  const double uy0 = wy - static_cast<double>(ny);
  const bool local = (ux0 * ux0 + uy0 * uy0 < 0.25) && in_lattice(nx, ny);

  Evaluation ev;
  double gx = 0.0, gy = 0.0, hx = 0.0, hy = 0.0;  // sums of u^-3 and u^-4
  for (const auto& cl : clusters_) {
    const double dist = std::hypot(wx - cl.center, wy) - cl.radius;
    const auto count = static_cast<double>(cl.end - cl.begin);
    if (dist > 0.0) {
      const double bound = count / (dist * dist * dist);
      if (bound < threshold) {
        ev.dropped_bound += bound;
        continue;
      }
    }
    ++ev.clusters_summed;
    // Four independent partial sums; the local pole (the only lattice point
    // with r2 < 1/4) is masked out.
    double ax[4] = {}, ay[4] = {}, bx[4] = {}, by[4] = {};
    const double skip = local ? 0.25 : 0.0;
    for (std::size_t k = cl.begin; k < cl.end; k += 4) {
      const std::size_t lanes = std::min<std::size_t>(4, cl.end - k);
      for (std::size_t j = 0; j < lanes; ++j) {
        const double ux = wx - xs_[k + j];
        const double uy = wy - ys_[k + j];
        const double r2 = ux * ux + uy * uy;
        const double inv = r2 < skip ? 0.0 : 1.0 / r2;
        const double ix = ux * inv;
        const double iy = -uy * inv;
        const double i2x = ix * ix - iy * iy;
        const double i2y = 2.0 * ix * iy;
        ax[j] += i2x * ix - i2y * iy;
        ay[j] += i2x * iy + i2y * ix;
        bx[j] += i2x * i2x - i2y * i2y;
        by[j] += 2.0 * i2x * i2y;
      }
    }
    gx += (ax[0] + ax[1]) + (ax[2] + ax[3]);
    gy += (ay[0] + ay[1]) + (ay[2] + ay[3]);
    hx += (bx[0] + bx[1]) + (bx[2] + bx[3]);
    hy += (by[0] + by[1]) + (by[2] + by[3]);
  }
  const Complex rest{gx, gy};
  const Complex rest_prime = -3.0 * Complex{hx, hy};
  if (local) {
    // g = N / D with N = 1 + u^3 h, D = u^3; |dg| = |N'D - ND'| / (|N|^2 + |D|^2).
    const Complex u{ux0, uy0};
    const Complex u2 = u * u;
    const Complex u3 = u2 * u;
    const Complex num = 1.0 + u3 * rest;
    const Complex cross = u3 * u3 * rest_prime - 3.0 * u2;
    ev.spherical = std::abs(cross) / (std::norm(num) + std::norm(u3));
    ev.reciprocal = true;
    if (u3 == Complex{}) {
      ev.g = {std::numeric_limits<double>::infinity(), 0.0};
      ev.dg = ev.g;
    } else {
      ev.g = rest + 1.0 / u3;
      ev.dg = rest_prime - 3.0 / (u3 * u);
    }
    return ev;
  }
  ev.g = rest;
  ev.dg = rest_prime;
  const double mod = std::abs(ev.g);
  if (mod > 1.0) {
    ev.spherical = (std::abs(ev.dg) / (mod * mod)) / (1.0 + 1.0 / (mod * mod));
  } else {
    ev.spherical = std::abs(ev.dg) / (1.0 + mod * mod);
  }
  return ev;
}

double ClusterCurve::omitted_tail_bound(Complex w) const {
  const double r = std::abs(w);
  if (!(r < valid_radius_)) return std::numeric_limits<double>::infinity();
  double total = 0.0;
  for (int n = spec_.n_max + 1; n < 1000000; ++n) {
    const double d = spec_.center(n) - spec_.radius(n) - r;
    const double count = (2.0 * n + 1.0) * (2.0 * n + 1.0);
    const double term = count / (d * d * d);
    total += term;
    if (term * n < 1e-16 * std::max(total, 1e-300)) break;
  }
  return total;
}

std::vector<Complex> ClusterCurve::cluster_points(int n) const {
  const auto& cl = clusters_.at(static_cast<std::size_t>(n - 1));
  std::vector<Complex> pts;
  for (std::size_t k = cl.begin; k < cl.end; ++k) pts.emplace_back(xs_[k], ys_[k]);
  return pts;
}

std::string ClusterCurve::description() const {
  std::ostringstream out;
  out.precision(8);
  out << "cluster[n_max=" << spec_.n_max << ",a_n=" << spec_.center_scale << "*n^"
      << spec_.center_power << ",c=" << c_ << ",points=" << xs_.size() << "]";
  return out.str();
}

ClusterCurve build_cluster_curve(const ClusterSpec& spec, double c) { return ClusterCurve(spec, c); }

// ---------------------------------------------------------------------------
// Curves

MeromorphicCurve MeromorphicCurve::constant(Complex value) {
  return RationalCurve(Polynomial({value}), Polynomial({Complex{1.0, 0.0}}));
}

MeromorphicCurve MeromorphicCurve::identity() { return monomial({1.0, 0.0}, 1); }

MeromorphicCurve MeromorphicCurve::monomial(Complex a, int k) {
  if (k < 0) {
    std::vector<Complex> den(static_cast<std::size_t>(-k) + 1);
    den.back() = 1.0;
    return RationalCurve(Polynomial({a}), Polynomial(std::move(den)));
  }
  std::vector<Complex> num(static_cast<std::size_t>(k) + 1);
  num.back() = a;
  return RationalCurve(Polynomial(std::move(num)), Polynomial({Complex{1.0, 0.0}}));
}

Complex MeromorphicCurve::value(Complex z) const {
  return std::visit([&](const auto& f) { return f.value(z); }, rep_);
}

double MeromorphicCurve::spherical_derivative(Complex z) const {
  return std::visit([&](const auto& f) { return f.spherical_derivative(z); }, rep_);
}

std::string MeromorphicCurve::description() const {
  return std::visit([](const auto& f) { return f.description(); }, rep_);
}

double spherical_derivative(const MeromorphicCurve& f, Complex z) {
  return f.spherical_derivative(z);
}

namespace {

std::vector<Complex> parse_coefficients(const nlohmann::json& arr, const char* name) {
  if (!arr.is_array()) throw ConfigError(std::string("rational json: '") + name + "' must be an array");
  std::vector<Complex> out;
  for (const auto& c : arr) {
    if (c.is_number()) {
      out.emplace_back(c.get<double>(), 0.0);
    } else if (c.is_array() && c.size() == 2 && c[0].is_number() && c[1].is_number()) {
      out.emplace_back(c[0].get<double>(), c[1].get<double>());
    } else {
      throw ConfigError(std::string("rational json: '") + name +
                        "' entries must be [re, im] pairs");
    }
  }
  return out;
}

}  // namespace

RationalCurve parse_rational_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("rational json: ") + e.what());
  }
  if (!j.contains("numerator") || !j.contains("denominator")) {
    throw ConfigError("rational json: needs 'numerator' and 'denominator'");
  }
  try {
    return RationalCurve(Polynomial(parse_coefficients(j["numerator"], "numerator")),
                         Polynomial(parse_coefficients(j["denominator"], "denominator")));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

RationalCurve load_rational_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open curve json: " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_rational_json(buf.str());
}

// ---------------------------------------------------------------------------
// Energy field

namespace {

class CurveEnergySource final : public FieldSource {
 public:
  explicit CurveEnergySource(MeromorphicCurve f) : f_(std::move(f)) {}
  double operator()(const Point& x) const override {
    const double d = f_.spherical_derivative({x[0], x[1]});
    const double e = d * d;
    if (e > 1.0) {
      clipped_.fetch_add(1, std::memory_order_relaxed);
      return 1.0;
    }
    return e;
  }
  std::uint64_t clipped() const { return clipped_.load(); }

 private:
  MeromorphicCurve f_;
  mutable std::atomic<std::uint64_t> clipped_{0};
};

}  // namespace

DensityField curve_energy_field(const MeromorphicCurve& f) {
  return DensityField(2, FieldKind::curve_energy, std::make_shared<CurveEnergySource>(f), 1.0,
                      std::nullopt, "energy(" + f.description() + ")");
}

std::uint64_t energy_clip_count(const DensityField& field) {
  const auto* src = dynamic_cast<const CurveEnergySource*>(&field.source());
  return src ? src->clipped() : 0;
}

// ---------------------------------------------------------------------------
// Brody constant and calibration

BrodyEstimate brody_constant(const MeromorphicCurve& f, const ComplexBox& box, double spacing) {
  if (!(spacing > 0.0)) throw std::invalid_argument("brody_constant: spacing must be > 0");
  const auto nx = static_cast<std::size_t>(std::floor((box.hi.real() - box.lo.real()) / spacing + 1e-9)) + 1;
  const auto ny = static_cast<std::size_t>(std::floor((box.hi.imag() - box.lo.imag()) / spacing + 1e-9)) + 1;
  std::vector<double> values(nx * ny);
  parallel_for(nx, [&](std::size_t i) {
    for (std::size_t j = 0; j < ny; ++j) {
      const Complex z{box.lo.real() + static_cast<double>(i) * spacing,
                      box.lo.imag() + static_cast<double>(j) * spacing};
      values[i * ny + j] = f.spherical_derivative(z);
    }
  });
  std::vector<std::size_t> idx(values.size());
  for (std::size_t k = 0; k < idx.size(); ++k) idx[k] = k;
  const std::size_t top = std::min<std::size_t>(10, idx.size());
  std::partial_sort(idx.begin(), idx.begin() + static_cast<long>(top), idx.end(),
                    [&](std::size_t a, std::size_t b) {
                      return values[a] > values[b] || (values[a] == values[b] && a < b);
                    });
  BrodyEstimate best;
  best.sup_estimate = values[idx[0]];
  best.argmax = {box.lo.real() + static_cast<double>(idx[0] / ny) * spacing,
                 box.lo.imag() + static_cast<double>(idx[0] % ny) * spacing};
  const double fine = spacing / 10.0;
  for (std::size_t t = 0; t < top; ++t) {
    const Complex z0{box.lo.real() + static_cast<double>(idx[t] / ny) * spacing,
                     box.lo.imag() + static_cast<double>(idx[t] % ny) * spacing};
    for (int a = -10; a <= 10; ++a) {
      for (int b = -10; b <= 10; ++b) {
        const Complex z = z0 + Complex{a * fine, b * fine};
        if (z.real() < box.lo.real() || z.real() > box.hi.real() || z.imag() < box.lo.imag() ||
            z.imag() > box.hi.imag()) {
          continue;
        }
        const double v = f.spherical_derivative(z);
        if (v > best.sup_estimate) {
          best.sup_estimate = v;
          best.argmax = z;
        }
      }
    }
  }
  std::ostringstream note;
  note << "grid spacing " << spacing << " with refinement " << fine
       << " around the top " << top << " samples; sampled maximum only";
  best.note = note.str();
  return best;
}

double scale_from_sup(double sup_dg, double margin) {
  if (!(margin > 0.0 && margin < 1.0)) throw std::invalid_argument("calibrate: margin must lie in (0,1)");
  if (!(sup_dg > 0.0) || !std::isfinite(sup_dg)) {
    throw std::runtime_error("calibrate: sampled sup of |dg| is not a positive finite number");
  }
  return (1.0 - margin) / sup_dg;
}

ComplexBox cluster_region(const ClusterSpec& spec) {
  spec.validate();
  const double gap = 1.0;
  const double limit = spec.center(spec.n_max + 1) - spec.radius(spec.n_max + 1) - 0.5;
  const double x_lo = spec.center(1) - spec.radius(1) - gap;
  const double y = spec.radius(spec.n_max) + gap;
  // Keep the corners inside the truncation region.
  const double x_hi = std::min(spec.center(spec.n_max) + spec.radius(spec.n_max) + gap,
                               std::sqrt(std::max(0.0, limit * limit - y * y)));
  return {{x_lo, -y}, {x_hi, y}};
}

Calibration calibrate_c(const ClusterSpec& spec, double margin, double spacing_w) {
  const ComplexBox region = cluster_region(spec);
  const MeromorphicCurve g = ClusterCurve(spec, 1.0);
  const auto est = brody_constant(g, region, spacing_w);
  Calibration cal;
  cal.sup_dg = est.sup_estimate;
  cal.c = scale_from_sup(est.sup_estimate, margin);
  cal.argmax_w = est.argmax;
  cal.region_w = region;
  cal.spacing_w = spacing_w;
  return cal;
}

}  // namespace edens
