#include <benchmark/benchmark.h>

#include "gslab/asymptotics.hpp"
#include "gslab/emden_fowler.hpp"
#include "gslab/shooting.hpp"

namespace {

gslab::SweepSpec critical_n5() {
  gslab::SweepSpec s;
  s.regime = gslab::Regime::Critical;
  s.N = 5;
  s.q = 6.0;
  s.grid = {1e-2, 1e-5, 11};
  return s;
}

void BM_Solve(benchmark::State& state) {
  const gslab::ProblemParams pp{5, 10.0 / 3.0, 6.0, 1e-3, gslab::Family::P_eps};
  for (auto _ : state) benchmark::DoNotOptimize(gslab::find_ground_state(pp).amplitude);
}

void BM_SweepSerial(benchmark::State& state) {
  const auto spec = critical_n5();
  gslab::sobolev_constant(spec.N);
  for (auto _ : state) benchmark::DoNotOptimize(gslab::sweep_serial(spec).fitted_exponent);
}

void BM_SweepParallel(benchmark::State& state) {
  const auto spec = critical_n5();
  gslab::sobolev_constant(spec.N);
  const int jobs = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(gslab::sweep(spec, jobs).fitted_exponent);
}

}  // namespace

BENCHMARK(BM_Solve)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SweepParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
