#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "edens/curves.hpp"
#include "edens/estimators.hpp"

namespace edens {

/// Settings of the verification suite.  Cluster-curve lengths are given in
/// lattice units and converted with the calibrated scale.
struct VerifyConfig {
  std::uint64_t seed = 0;
  std::set<int> criteria = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  double equality_tolerance = 0.02;
  /// Seconds allowed per criterion; criteria without an entry are untimed.
  std::map<int, double> time_limits = {{1, 10.0}, {2, 30.0}, {3, 600.0}, {8, 1200.0}};

  // Random Vitali families.
  int vitali_families = 1000;
  int vitali_max_balls = 200;
  double vitali_min_radius = 0.1;
  double vitali_max_radius = 10.0;
  double vitali_extent = 100.0;

  // Closed-form characteristic of f(z) = z.
  std::vector<double> oracle_radii = {2.0, std::numbers::e, 10.0, 40.0};
  double oracle_rel_tol = 1e-4;
  QuadratureConfig oracle_quadrature{8, 16, 0.02, 8, 2e-4, 0.0};

  // Periodic fields.
  std::vector<double> outer_radii = {5.0, 10.0, 20.0, 30.0, 40.0};
  std::vector<double> inner_radii = {2.5, 5.0, 10.0};
  double search_spacing = 0.1;
  QuadratureConfig periodic_quadrature{8, 16, 0.05, 8, 1e-6, 5e-3};
  double family_spacing = 0.5;
  std::vector<double> ow_sizes = {5.0, 10.0, 20.0, 40.0};

  // Curves.
  std::vector<double> curve_radii = {1.0, 2.0, 4.0, 8.0, 16.0, 32.0};
  QuadratureConfig curve_quadrature{8, 16, 0.1, 8, 1e-4, 0.0};
  /// rho rows need the average to ~1e-4, so the tolerance scales with |B_R|.
  QuadratureConfig curve_rho_quadrature{8, 16, 0.1, 8, 1e-4, 1e-4};
  double curve_search_half_width = 1.0;
  double curve_search_spacing = 0.25;
  double brody_half_width = 10.0;
  double brody_spacing = 0.05;
  double brody_slack = 1e-9;
  double characteristic_slack = 1e-6;

  // Sparse cluster curve.
  ClusterSpec cluster{};
  int cluster_small_n_max = 4;
  double calibration_margin = 0.1;
  double calibration_spacing = 0.05;
  double brody_check_spacing = 0.02;
  double cluster_cell = 0.05;
  /// Quadrature tolerance per unit lattice area.
  double cluster_rel_tol = 0.05;
  double cluster_orbit_abs_tol = 0.05;
  double cluster_nsa_abs_tol = 1.0;
  double floor_stability = 0.2;
  std::vector<double> cluster_rho_radii = {1.0, 2.0, 3.0, 4.0};
  double cluster_search_half_width = 0.5;
  double cluster_search_spacing = 0.5;
  /// Pattern-search passes after the grid; each new centre costs a full profile.
  int cluster_search_refine_passes = 0;

  /// Criterion 10: rerun criteria 1-9 and compare the CSV text.
  bool check_determinism = true;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double threshold = 0.0;
  std::string detail;
  double seconds = 0.0;
};

struct VerifyResult {
  std::vector<CriterionResult> criteria;
  std::vector<DensityReport> reports;
  std::string csv;

  bool passed() const;
};

struct ClusterExperiment {
  Calibration calibration;
  OrbitReport orbit;
  double floor_error = 0.0;  // error bound of the best centre's inf
};

/// Quadrature for the cluster curve at scale c: cell and tolerance are set
/// per unit lattice length and area.
QuadratureConfig cluster_quadrature(const VerifyConfig& config, double c, double abs_tol);

/// Calibrates c for the spec and runs one translate orbit per cluster centre
/// a_n / c, n = 2..n_max, over t in [1/c, n/c].
ClusterExperiment run_cluster_experiment(const VerifyConfig& config, const ClusterSpec& spec,
                                         const std::optional<DensityReport>& reference = {});

using CriterionCallback = std::function<void(const CriterionResult&)>;

VerifyResult run_verification(const VerifyConfig& config, const CriterionCallback& on_result = {});

/// summary.json text: one entry per criterion with its margin.
std::string summary_json(const VerifyResult& result);

/// One line per criterion: "[PASS] 3 name: measured ... threshold ... (detail)".
std::string format_criterion(const CriterionResult& result);

}  // namespace edens
