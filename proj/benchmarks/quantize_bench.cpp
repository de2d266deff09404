#include <benchmark/benchmark.h>

#include "hjdyn/quantize.hpp"

using namespace hjdyn;

static void BM_CrankNicolson(benchmark::State& state) {
  const Grid g{-10.0, 10.0, static_cast<std::size_t>(state.range(0)), Boundary::dirichlet};
  const HamiltonianOperator op = build_operator(parse("p^2/2 + q^2/2"), g);
  const Wavefunction psi = gaussian(g, 1.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(evolve(psi, op, 1e-3, 100));
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_CrankNicolson)->Arg(1024)->Arg(8192)->Unit(benchmark::kMillisecond);

static void BM_CrankNicolsonPeriodic(benchmark::State& state) {
  const Grid g{-10.0, 10.0, 1024, Boundary::periodic};
  const HamiltonianOperator op = build_operator(parse("p^2/2 + q^2/8"), g);
  const Wavefunction psi = gaussian(g, 1.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(evolve(psi, op, 1e-3, 100));
}
BENCHMARK(BM_CrankNicolsonPeriodic)->Unit(benchmark::kMillisecond);

static void BM_Spectral(benchmark::State& state) {
  const Grid g{-10.0, 10.0, static_cast<std::size_t>(state.range(0)), Boundary::periodic};
  const HamiltonianOperator op = build_operator(parse("sqrt(p^2 + 1)"), g);
  const Wavefunction psi = gaussian(g, 0.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(evolve(psi, op, 1e-2, 100));
}
BENCHMARK(BM_Spectral)->Arg(1024)->Arg(8192)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
