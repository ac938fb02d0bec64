#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "edens/curves.hpp"
#include "edens/field.hpp"

namespace edens {

enum class ScheduleRole { outer_R, inner_r, nsa_r };

std::string_view to_string(ScheduleRole role);

/// Finite, strictly increasing radii standing in for a limit in the radius.
class RadiusSchedule {
 public:
  RadiusSchedule(std::vector<double> radii, ScheduleRole role);

  /// count radii spaced geometrically from first to last inclusive.
  static RadiusSchedule geometric(double first, double last, int count, ScheduleRole role);

  const std::vector<double>& radii() const { return radii_; }
  ScheduleRole role() const { return role_; }
  double front() const { return radii_.front(); }
  double back() const { return radii_.back(); }
  std::size_t size() const { return radii_.size(); }

 private:
  std::vector<double> radii_;
  ScheduleRole role_;
};

struct TableRow {
  std::optional<double> r;  // inner radius of (r, R) tables
  double radius = 0.0;      // R, t, or region size
  double estimate = 0.0;
  double error_bound = 0.0;
  std::string flags;  // ';'-separated

  bool operator==(const TableRow&) const = default;
};

struct ConvergenceTable {
  std::vector<TableRow> rows;
  double extrapolated = 0.0;
  double extrapolated_error = 0.0;
  std::string trend;
  /// Computed monotonicity flags, e.g. non_increasing_in_R.
  std::map<std::string, bool> flags;

  bool operator==(const ConvergenceTable&) const = default;
};

struct DensityReport {
  std::string functional;
  std::string subject;
  ConvergenceTable table;
  std::map<std::string, std::string> config;
  std::vector<std::string> warnings;

  bool operator==(const DensityReport&) const = default;
};

struct EstimatorOptions {
  /// Replace the last-row headline with a two-point L + C/R fit.
  bool richardson = false;
};

/// Geometric t-grid with points_per_octave points per doubling anchored at
/// t = 1, restricted to (lo, hi) and with both endpoints included.
std::vector<double> geometric_t_grid(double lo, double hi, int points_per_octave = 16);

/// Rows sup_a mu(B_R(a)) / |B_R| per R.
DensityReport rho_estimate(const DensityField& field, const RadiusSchedule& outer,
                           const TranslateSearchConfig& search, const QuadratureConfig& q,
                           const EstimatorOptions& options = {});

/// Rows sup_a inf_{r <= t <= R} mu(B_t(a)) / |B_t| for every r < R.
DensityReport rho_tilde_estimate(const DensityField& field, const RadiusSchedule& inner,
                                 const RadiusSchedule& outer, const TranslateSearchConfig& search,
                                 const QuadratureConfig& q, const EstimatorOptions& options = {});

struct RhoPair {
  DensityReport rho;
  DensityReport rho_tilde;
};

/// Both reports from one set of translate profiles.
RhoPair rho_and_rho_tilde(const DensityField& field, const RadiusSchedule& inner,
                          const RadiusSchedule& outer, const TranslateSearchConfig& search,
                          const QuadratureConfig& q, const EstimatorOptions& options = {});

/// T(r) = int_1^r mu(B_t) dt / t from a centred mass profile (2-D only).
MassEstimate nsa_characteristic(const DensityField& energy, double r, const QuadratureConfig& q);

struct NsaEstimate {
  DensityReport upper;  // rho_nsa_upper: max over the trailing half of rows
  DensityReport lower;  // rho_nsa_lower: min over the trailing half of rows
  std::vector<MassEstimate> characteristic;  // T(r) per schedule radius
};

/// Rows 2 T(r) / (pi r^2).
NsaEstimate rho_nsa_estimate(const DensityField& energy, const RadiusSchedule& schedule,
                             const QuadratureConfig& q);

/// Rows max over members of mu(B_R) / |B_R| (balls centred at the origin).
DensityReport rho_family_estimate(std::span<const DensityField> family,
                                  const RadiusSchedule& outer, const QuadratureConfig& q);

/// Rows h(Omega_n) / |Omega_n| with h(Omega) = sup over the translate grid of
/// int_{a + Omega} phi (or int_Omega phi when sup_translate is false).
/// Requires a Folner-consistent sequence of balls and boxes.
DensityReport ow_average(const DensityField& field, bool sup_translate,
                         std::span<const Region> sequence, const TranslateSearchConfig& search,
                         const QuadratureConfig& q);

struct OrbitCenter {
  Complex center;
  std::vector<TableRow> profile;  // t -> disk average of |df|^2 about the centre
  double inf_value = 0.0;         // inf over the t-grid on [min r, R]
  double inf_error = 0.0;
  double inf_at = 0.0;
  double R = 0.0;  // upper end of the inf window
};

struct OrbitReport {
  std::string subject;
  std::vector<OrbitCenter> centers;
  std::size_t best = 0;
  double best_inf = 0.0;
  double R = 0.0;
  std::optional<double> rho_reference;
  std::optional<double> rho_reference_error;

  /// orbit_profile rows (one per centre and t) and orbit_inf rows (one per centre).
  std::vector<DensityReport> to_reports() const;
};

OrbitReport translate_orbit_experiment(const MeromorphicCurve& f, std::span<const Complex> centers,
                                       const RadiusSchedule& inner, double R,
                                       const QuadratureConfig& q,
                                       const std::optional<DensityReport>& rho_reference = {});

/// Pairwise monotonicity check along a table's rows, tolerant to error bounds.
bool non_increasing_within(std::span<const TableRow> rows);
bool non_decreasing_within(std::span<const TableRow> rows);

}  // namespace edens
