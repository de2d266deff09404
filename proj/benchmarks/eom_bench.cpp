#include <benchmark/benchmark.h>

#include "hjdyn/eom.hpp"
#include "hjdyn/systems.hpp"

using namespace hjdyn;

static void BM_IntegrateOscillator(benchmark::State& state) {
  const EquationsOfMotion eom = derive_eom(build_constraints(instantiate("parametrized_oscillator", {{"V", "q^2/2"}})));
  const PhaseState s = initial_state(eom, {{"q", 1.0}}, 0.0);
  IntegrateOptions opt;
  opt.end = 10.0;
  opt.step = 10.0 / static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(integrate(eom, s, opt));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_IntegrateOscillator)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

static void BM_IntegrateCharged(benchmark::State& state) {
  const EquationsOfMotion eom = derive_eom(build_constraints(
      instantiate("relativistic_charged", {{"m", "1"}, {"c", "1"}, {"e", "1"}, {"A0", "0"}, {"A1", "-q2/2"},
                                           {"A2", "q1/2"}, {"A3", "0"}})));
  const PhaseState s = initial_state(eom, {{"p1", 1.0}}, 0.0);
  IntegrateOptions opt;
  opt.end = 10.0;
  opt.step = 1e-3;
  for (auto _ : state) benchmark::DoNotOptimize(integrate(eom, s, opt));
}
BENCHMARK(BM_IntegrateCharged)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
