#include <benchmark/benchmark.h>

#include <vector>

#include "recint/memory.hpp"
#include "recint/synth.hpp"

namespace {

void BM_Fgn(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(recint::fgn(n, 0.8, 3));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Fgn)->RangeMultiplier(4)->Range(1 << 12, 1 << 20)->Complexity(benchmark::oNLogN)->Unit(benchmark::kMillisecond);

void BM_Dfa(benchmark::State& state) {
  const auto x = recint::fgn(static_cast<std::size_t>(state.range(0)), 0.8, 3);
  const int order = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(recint::dfa(x, order));
}
BENCHMARK(BM_Dfa)->ArgsProduct({{1 << 14, 1 << 18}, {1, 2}})->Unit(benchmark::kMillisecond);

void BM_DfaThreads(benchmark::State& state) {
  const auto x = recint::fgn(1 << 20, 0.8, 3);
  const auto threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(recint::dfa(x, 1, threads));
}
BENCHMARK(BM_DfaThreads)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
