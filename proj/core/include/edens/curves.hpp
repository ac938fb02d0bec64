#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "edens/field.hpp"

namespace edens {

using Complex = std::complex<double>;

/// Polynomial with complex coefficients in ascending powers.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Complex> ascending);

  Complex operator()(Complex z) const;
  Polynomial derivative() const;
  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<Complex>& coefficients() const { return coeffs_; }

 private:
  std::vector<Complex> coeffs_;
};

/// Resultant of two polynomials (determinant of the Sylvester matrix).
Complex resultant(const Polynomial& p, const Polynomial& q);

/// f = P / Q with P, Q coprime.
class RationalCurve {
 public:
  RationalCurve(Polynomial numerator, Polynomial denominator);

  /// Infinite at poles.
  Complex value(Complex z) const;
  /// |f'| / (1 + |f|^2) via the homogeneous form |P'Q - PQ'| / (|P|^2 + |Q|^2),
  /// which is finite and continuous across poles.
  double spherical_derivative(Complex z) const;

  const Polynomial& numerator() const { return p_; }
  const Polynomial& denominator() const { return q_; }
  std::string description() const;

 private:
  Polynomial p_, q_, dp_, dq_;
};

/// Lattice clusters Z^2 cap {|w - a_n| <= n}, n = 1..n_max, with a_n = scale * n^power.
struct ClusterSpec {
  int n_max = 6;
  double center_scale = 1.0;
  double center_power = 2.0;

  double center(int n) const;
  double radius(int n) const { return n; }
  /// a_n strictly increasing and consecutive clusters never overlap
  /// (a_{n+1} - (n+1) >= a_n + n); checked through n_max + 1.
  void validate() const;
};

/// f_c(z) = g(cz), g(w) = sum over the clusters of 1 / (w - lambda)^3.
class ClusterCurve {
 public:
  ClusterCurve(ClusterSpec spec, double c, double drop_threshold = 1e-12);

  struct Evaluation {
    Complex g;            // g(w); infinite at a lattice point
    Complex dg;           // g'(w)
    double spherical = 0.0;  // |dg|(w)
    double dropped_bound = 0.0;  // bound on the skipped clusters' contribution to g
    int clusters_summed = 0;
    bool reciprocal = false;  // pole-local homogeneous branch used
  };

  /// Evaluates g at w.  Clusters whose bound count * dist^-3 falls below the
  /// threshold are skipped and their bound accumulated.  Throws
  /// std::domain_error when |w| >= valid_radius().
  Evaluation evaluate_w(Complex w, double threshold) const;
  Evaluation evaluate_w(Complex w) const { return evaluate_w(w, threshold_); }

  Complex value(Complex z) const { return evaluate_w(c_ * z).g; }
  /// |df_c|(z) = c |dg|(cz).
  double spherical_derivative(Complex z) const { return c_ * evaluate_w(c_ * z).spherical; }

  /// Bound on sum_{n > n_max} sum_{lambda in cluster n} |w - lambda|^-3, the
  /// distance to the untruncated lattice sum.
  double omitted_tail_bound(Complex w) const;
  /// Evaluation is accepted for |w| < a_{n_max+1} - (n_max + 1).
  double valid_radius() const { return valid_radius_; }

  double scale() const { return c_; }
  double drop_threshold() const { return threshold_; }
  const ClusterSpec& spec() const { return spec_; }
  ClusterCurve with_scale(double c) const { return ClusterCurve(spec_, c, threshold_); }
  std::size_t lattice_size() const { return xs_.size(); }
  /// Lattice points of cluster n (1-based); points shared by touching
  /// clusters belong to the lower index.
  std::vector<Complex> cluster_points(int n) const;
  std::string description() const;

 private:
  struct Cluster {
    double center;
    double radius;
    std::size_t begin;
    std::size_t end;
  };

  bool in_lattice(long x, long y) const;

  ClusterSpec spec_;
  double c_;
  double threshold_;
  double valid_radius_;
  std::vector<Cluster> clusters_;
  std::vector<double> xs_, ys_;
};

ClusterCurve build_cluster_curve(const ClusterSpec& spec, double c);

/// A map C -> CP^1 with |df| = |f'| / (1 + |f|^2).
class MeromorphicCurve {
 public:
  MeromorphicCurve(RationalCurve curve) : rep_(std::move(curve)) {}  // NOLINT
  MeromorphicCurve(ClusterCurve curve) : rep_(std::move(curve)) {}   // NOLINT

  static MeromorphicCurve constant(Complex value);
  static MeromorphicCurve identity();
  /// a z^k
  static MeromorphicCurve monomial(Complex a, int k);

  Complex value(Complex z) const;
  double spherical_derivative(Complex z) const;
  std::string description() const;

  bool is_cluster() const { return std::holds_alternative<ClusterCurve>(rep_); }
  const ClusterCurve* cluster() const { return std::get_if<ClusterCurve>(&rep_); }
  const RationalCurve* rational() const { return std::get_if<RationalCurve>(&rep_); }

 private:
  std::variant<RationalCurve, ClusterCurve> rep_;
};

/// {"numerator": [[re, im], ...], "denominator": [[re, im], ...]}, coefficients
/// of z^0, z^1, ...
RationalCurve parse_rational_json(std::string_view text);
RationalCurve load_rational_json(const std::filesystem::path& path);

double spherical_derivative(const MeromorphicCurve& f, Complex z);

/// The D = 2 field z -> min(|df|(z)^2, 1).  Clipped samples are counted.
DensityField curve_energy_field(const MeromorphicCurve& f);
/// Number of clipped evaluations so far; 0 for fields of other kinds.
std::uint64_t energy_clip_count(const DensityField& field);

struct ComplexBox {
  Complex lo;
  Complex hi;
};

struct BrodyEstimate {
  double sup_estimate = 0.0;
  Complex argmax;
  std::string note;
};

/// Grid maximum of |df| followed by a 21 x 21 sub-grid at spacing/10 around
/// the ten best grid points.  No global bound is claimed.
BrodyEstimate brody_constant(const MeromorphicCurve& f, const ComplexBox& box, double spacing);

struct Calibration {
  double c = 0.0;
  double sup_dg = 0.0;  // sampled sup of |dg| for the unscaled sum
  Complex argmax_w;
  ComplexBox region_w;
  double spacing_w = 0.0;
};

/// c = (1 - margin) / s from the scaling identity |df_c|(z) = c |dg|(cz).
double scale_from_sup(double sup_dg, double margin);
/// w-region covering every cluster plus a unit gap, clipped to the valid radius.
ComplexBox cluster_region(const ClusterSpec& spec);
Calibration calibrate_c(const ClusterSpec& spec, double margin, double spacing_w = 0.05);

}  // namespace edens
