#include <random>

#include <benchmark/benchmark.h>

#include "shiftdecon/combined_shift.hpp"
#include "shiftdecon/step_shift.hpp"

namespace sd = shiftdecon;

namespace {

sd::Signal1D random_signal(sd::Index n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  std::vector<double> v(static_cast<std::size_t>(n));
  for (double& x : v) x = u(rng);
  return sd::Signal1D(0, std::move(v));
}

void BM_Convolve(benchmark::State& state) {
  const sd::Signal1D h = random_signal(state.range(0), 1);
  const sd::Signal1D s = random_signal(13, 2);
  for (auto _ : state) benchmark::DoNotOptimize(sd::convolve(h, s));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Convolve)->RangeMultiplier(4)->Range(64, 16384)->Complexity();

void BM_StepByStep(benchmark::State& state) {
  const sd::Index n = state.range(0);
  const sd::Signal1D S(0, {1.0, 0.8, 0.6, 0.4, 0.2, 0.1});
  const sd::Signal1D H = sd::convolve(random_signal(n, 3), S);
  for (auto _ : state) benchmark::DoNotOptimize(sd::step_by_step(H, S, {n, 1e12, true}));
}
BENCHMARK(BM_StepByStep)->Arg(16)->Arg(64)->Arg(256);

void BM_TwoTermDoubling(benchmark::State& state) {
  const sd::Signal1D S(0, {1.0, 0.0, 0.0, -0.7});
  const sd::Signal1D H = sd::convolve(random_signal(state.range(0), 4), S);
  for (auto _ : state) benchmark::DoNotOptimize(sd::deconvolve_two_term(H, S));
}
BENCHMARK(BM_TwoTermDoubling)->RangeMultiplier(4)->Range(64, 4096);

void BM_SolveCombination(benchmark::State& state) {
  const sd::Index L = state.range(0);
  const sd::Signal1D S(0, {0.01, 0.3, 1.0, 0.6, 0.2, 0.05});
  for (auto _ : state) benchmark::DoNotOptimize(sd::solve_combination(S, 2, L, sd::unit_target(L)));
}
BENCHMARK(BM_SolveCombination)->Arg(16)->Arg(64)->Arg(256);

void BM_CombinedDeconvolve(benchmark::State& state) {
  const sd::Signal1D S(0, {0.01, 0.3, 1.0, 0.6, 0.2, 0.05});
  const sd::Signal1D H = sd::convolve(random_signal(state.range(0), 5), S);
  for (auto _ : state) benchmark::DoNotOptimize(sd::combined_deconvolve(H, S));
}
BENCHMARK(BM_CombinedDeconvolve)->Arg(16)->Arg(64)->Arg(128);

}  // namespace

BENCHMARK_MAIN();
