#include <benchmark/benchmark.h>

#include <random>

#include "edens/covering.hpp"

using namespace edens;

static BallFamily random_family(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pos(0.0, 100.0);
  std::uniform_real_distribution<double> rad(0.1, 10.0);
  std::vector<Ball> balls;
  for (std::size_t i = 0; i < n; ++i) balls.push_back(make_ball(Point{pos(rng), pos(rng)}, rad(rng)));
  return BallFamily(2, std::move(balls));
}

static void BM_VitaliSelect(benchmark::State& state) {
  const auto family = random_family(static_cast<std::size_t>(state.range(0)), 7);
  for (auto _ : state) benchmark::DoNotOptimize(vitali_select(family).size());
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_VitaliSelect)->RangeMultiplier(4)->Range(16, 4096)->Complexity();

static void BM_VerifyCover(benchmark::State& state) {
  const auto family = random_family(static_cast<std::size_t>(state.range(0)), 7);
  const auto selected = vitali_select(family);
  for (auto _ : state) benchmark::DoNotOptimize(verify_cover(family, selected).ok());
}
BENCHMARK(BM_VerifyCover)->Arg(200)->Arg(1000);
