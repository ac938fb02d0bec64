#include <benchmark/benchmark.h>

#include "edens/curves.hpp"

using namespace edens;

static void BM_ClusterSphericalDerivative(benchmark::State& state) {
  ClusterSpec spec;
  spec.n_max = static_cast<int>(state.range(0));
  const ClusterCurve curve(spec, 1.0);
  const double x_max = 0.9 * curve.valid_radius();
  double x = 0.13;
  for (auto _ : state) {
    benchmark::DoNotOptimize(curve.evaluate_w(Complex{x, 0.37}).spherical);
    x += 1e-3;
    if (x > x_max) x = 0.13;
  }
  state.counters["lattice_points"] = static_cast<double>(curve.lattice_size());
}
BENCHMARK(BM_ClusterSphericalDerivative)->DenseRange(2, 6, 2);

static void BM_RationalSphericalDerivative(benchmark::State& state) {
  const auto f = MeromorphicCurve::monomial({0.5, 0.0}, 2);
  double x = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(f.spherical_derivative(Complex{x, 1.0}));
    x += 1e-3;
  }
}
BENCHMARK(BM_RationalSphericalDerivative);

static void BM_CalibrateCluster(benchmark::State& state) {
  ClusterSpec spec;
  spec.n_max = 4;
  for (auto _ : state) benchmark::DoNotOptimize(calibrate_c(spec, 0.1, 0.1).c);
}
BENCHMARK(BM_CalibrateCluster)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
