#include <cmath>

#include <benchmark/benchmark.h>

#include "tlif/estimation.hpp"
#include "tlif/influence.hpp"

using namespace tlif;

static void BM_IntegrateExpMoment(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(integrate([](double x) { return x * x * std::exp(-x); }, 0, INFINITY));
  }
}
BENCHMARK(BM_IntegrateExpMoment);

static void BM_PopulationValue(benchmark::State& state) {
  const auto t = parse_measure_id("theil");
  const auto f = lognormal(0, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(t.evaluate(f));
}
BENCHMARK(BM_PopulationValue);

static void BM_GiniPopulation(benchmark::State& state) {
  const auto f = singh_maddala(2, 1, 3);
  for (auto _ : state) benchmark::DoNotOptimize(gini(f));
}
BENCHMARK(BM_GiniPopulation);

static void BM_GateauxOracle(benchmark::State& state) {
  const auto t = parse_measure_id("mld");
  const auto f = exponential(1);
  for (auto _ : state) benchmark::DoNotOptimize(gateaux_if(t, f, 2.0).value);
}
BENCHMARK(BM_GateauxOracle);

static void BM_AsymptoticVariance(benchmark::State& state) {
  const auto t = MeasureFunctional::gini();
  const auto f = exponential(1);
  for (auto _ : state) benchmark::DoNotOptimize(asymptotic_variance(t, f));
}
BENCHMARK(BM_AsymptoticVariance);

static void BM_DrawSample(benchmark::State& state) {
  const auto f = lognormal(0, 0.5);
  for (auto _ : state) {
    RngStream rng(42, 0);
    benchmark::DoNotOptimize(draw_sample(f, static_cast<std::size_t>(state.range(0)), rng));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DrawSample)->Arg(1000)->Arg(20000);

static void BM_PluginGini(benchmark::State& state) {
  RngStream rng(42, 0);
  const auto s = draw_sample(exponential(1), static_cast<std::size_t>(state.range(0)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(gini_plugin(s));
}
BENCHMARK(BM_PluginGini)->Arg(20000);

static void BM_Philox(benchmark::State& state) {
  RngStream rng(42, 0);
  for (auto _ : state) benchmark::DoNotOptimize(rng.next_uniform());
}
BENCHMARK(BM_Philox);
BENCHMARK_MAIN();
