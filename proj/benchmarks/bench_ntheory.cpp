#include <benchmark/benchmark.h>

#include "mdd/ntheory.hpp"

namespace {

void BM_SieveDivisorInterval(benchmark::State& state) {
  const int64_t span = state.range(0);
  for (auto _ : state) {
    auto table = mdd::sieve_divisor_count(1'000'000, 1'000'000 + span);
    benchmark::DoNotOptimize(table.values.data());
  }
  state.SetItemsProcessed(state.iterations() * (span + 1));
}
BENCHMARK(BM_SieveDivisorInterval)->Arg(1'000)->Arg(10'000)->Arg(100'000);

void BM_CumulativeDivisor(benchmark::State& state) {
  for (auto _ : state) {
    auto cum = mdd::cumulative_divisor(state.range(0));
    benchmark::DoNotOptimize(cum.partial_sums.data());
  }
}
BENCHMARK(BM_CumulativeDivisor)->Arg(10'000)->Arg(100'000);

void BM_RamanujanSum(benchmark::State& state) {
  int64_t n = 0;
  for (auto _ : state) {
    int64_t acc = 0;
    for (int64_t q = 1; q <= state.range(0); ++q)
      acc += mdd::ramanujan_sum(q, 123'456 + n);
    benchmark::DoNotOptimize(acc);
    ++n;
  }
}
BENCHMARK(BM_RamanujanSum)->Arg(30)->Arg(200);

}  // namespace

BENCHMARK_MAIN();
