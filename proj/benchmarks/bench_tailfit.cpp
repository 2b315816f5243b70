#include <benchmark/benchmark.h>

#include "recint/gof.hpp"
#include "recint/synth.hpp"
#include "recint/tailfit.hpp"

namespace {

void BM_FitTail(benchmark::State& state) {
  const auto x = recint::pareto_sample(static_cast<std::size_t>(state.range(0)), 2.5, 1.0, 17);
  for (auto _ : state) benchmark::DoNotOptimize(recint::fit_tail(x, 0.5));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_FitTail)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)->Complexity()->Unit(benchmark::kMillisecond);

void BM_Bootstrap(benchmark::State& state) {
  const auto x = recint::pareto_sample(10000, 2.5, 1.0, 17);
  const auto fit = recint::fit_fixed_xmin(x, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(recint::bootstrap_replicates(fit, static_cast<std::size_t>(state.range(0)), 5));
  }
}
BENCHMARK(BM_Bootstrap)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
