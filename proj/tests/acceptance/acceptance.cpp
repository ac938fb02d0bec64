// Runs every acceptance criterion once and prints one PASS/FAIL line each.
#include <cstdio>
#include <numbers>

#include "edens/harness.hpp"
#include "edens/parallel.hpp"

int main() {
  edens::VerifyConfig cfg;
  // Pinned thresholds.
  cfg.seed = 0;
  cfg.equality_tolerance = 0.02;
  cfg.time_limits = {{1, 10.0}, {2, 30.0}, {3, 600.0}, {8, 1200.0}};
  cfg.vitali_families = 1000;
  cfg.vitali_max_balls = 200;
  cfg.oracle_radii = {2.0, std::numbers::e, 10.0, 40.0};
  cfg.oracle_rel_tol = 1e-4;
  cfg.outer_radii = {5.0, 10.0, 20.0, 30.0, 40.0};
  cfg.inner_radii = {2.5, 5.0, 10.0};
  cfg.brody_slack = 1e-9;
  cfg.characteristic_slack = 1e-6;
  cfg.cluster.n_max = 6;
  cfg.cluster_small_n_max = 4;
  cfg.floor_stability = 0.2;
  cfg.check_determinism = true;

  const auto result = edens::run_verification(cfg, [](const edens::CriterionResult& r) {
    std::printf("%s\n", edens::format_criterion(r).c_str());
    std::fflush(stdout);
  });
  int failed = 0;
  for (const auto& c : result.criteria) failed += c.passed ? 0 : 1;
  std::printf("%d of %zu criteria passed\n", static_cast<int>(result.criteria.size()) - failed,
              result.criteria.size());
  return failed == 0 ? 0 : 1;
}
