#include <benchmark/benchmark.h>

#include <random>

#include "sheardiss/functional.hpp"
#include "sheardiss/solver.hpp"
#include "sheardiss/spectral_constant.hpp"

using namespace sheardiss;

namespace {

ScalarField smooth_field(const Grid& grid) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal;
  ScalarField f(grid);
  for (long m = -12; m <= 12; ++m) {
    const cplx c{normal(rng) / (1.0 + m * m), normal(rng) / (1.0 + m * m)};
    for (std::size_t j = 0; j < grid.size(); ++j) f.values[j] += c * std::polar(1.0, m * grid.y(j));
  }
  return f;
}

void BM_StepperAdvance(benchmark::State& state) {
  const auto sine = profile_from_name("sine");
  const Grid grid(static_cast<std::size_t>(state.range(0)));
  Stepper stepper(sine, grid, 1e-4, 0.05, 1.0);
  auto f = smooth_field(grid);
  for (auto _ : state) {
    stepper.advance(f);
    benchmark::DoNotOptimize(f.values.data());
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_StepperAdvance)->RangeMultiplier(2)->Range(64, 1024);

void BM_FunctionalComponents(benchmark::State& state) {
  const auto sine = profile_from_name("sine");
  const Grid grid(static_cast<std::size_t>(state.range(0)));
  FunctionalEvaluator eval(sine, grid, 1e-4);
  auto f = smooth_field(grid);
  f.t = 50.0;
  for (auto _ : state) benchmark::DoNotOptimize(eval.components(f, HypoParams{}));
}
BENCHMARK(BM_FunctionalComponents)->RangeMultiplier(2)->Range(64, 1024);

void BM_FunctionalSample(benchmark::State& state) {
  const auto sine = profile_from_name("sine");
  const Grid grid(static_cast<std::size_t>(state.range(0)));
  FunctionalEvaluator eval(sine, grid, 1e-4);
  auto f = smooth_field(grid);
  f.t = 50.0;
  const HypoParams params[] = {HypoParams::from_beta(0.25)};
  std::vector<FunctionalSample> out;
  for (auto _ : state) {
    eval.sample(f, params, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_FunctionalSample)->RangeMultiplier(2)->Range(64, 1024);

void BM_SpectralConstant(benchmark::State& state) {
  const auto sine = profile_from_name("sine");
  for (auto _ : state) benchmark::DoNotOptimize(estimate_spectral_constant(sine, 1e-3, 1.0 / std::sqrt(1e-3)));
}
BENCHMARK(BM_SpectralConstant)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
