#include <benchmark/benchmark.h>

#include "edens/field.hpp"

using namespace edens;

static void BM_BallMassProfileDiskLattice(benchmark::State& state) {
  const auto f = disk_lattice_field(2, 0.25, 1.0);
  QuadratureConfig q;
  q.rel_tol = 5e-3;
  const double t = static_cast<double>(state.range(0));
  for (auto _ : state) {
    auto profile = ball_mass_profile(f, Point{0.3, 0.1}, t, {}, q);
    benchmark::DoNotOptimize(profile.mass(t));
  }
}
BENCHMARK(BM_BallMassProfileDiskLattice)->Arg(5)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

static void BM_BoxMassStripes(benchmark::State& state) {
  const auto f = stripe_field(1.0, 0.5);
  QuadratureConfig q;
  q.rel_tol = 5e-3;
  const double side = static_cast<double>(state.range(0));
  const auto box = make_cube(2, side);
  for (auto _ : state) benchmark::DoNotOptimize(box_mass(f, box, q).value);
}
BENCHMARK(BM_BoxMassStripes)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond);
