#include <benchmark/benchmark.h>

#include "mdd/expsum.hpp"

namespace {

const mdd::DigitSet& ds() {
  static const mdd::DigitSet set(10, 7);
  return set;
}

void BM_DigitBlockProduct(benchmark::State& state) {
  double alpha = 0.1234567;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mdd::digit_exp_sum_block(ds(), alpha, state.range(0)));
    alpha += 1e-7;
  }
}
BENCHMARK(BM_DigitBlockProduct)->Arg(3)->Arg(5)->Arg(8);

void BM_DigitPrefix(benchmark::State& state) {
  double alpha = 0.7654321;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mdd::digit_exp_sum_prefix(ds(), alpha, 123'456'789));
    alpha += 1e-7;
  }
}
BENCHMARK(BM_DigitPrefix);

void BM_DigitDirect(benchmark::State& state) {
  const int64_t hi = state.range(0);
  double alpha = 0.3141592;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mdd::digit_exp_sum_direct(ds(), alpha, 0, hi));
    alpha += 1e-7;
  }
  state.SetItemsProcessed(state.iterations() * ds().count_prefix(hi));
}
BENCHMARK(BM_DigitDirect)->Arg(10'000)->Arg(100'000);

void BM_DivisorExpSum(benchmark::State& state) {
  const int64_t H = state.range(0);
  static const mdd::SieveTable table =
      mdd::sieve_divisor_count(1'000'000, 1'200'000);
  double alpha = 0.577215;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mdd::divisor_exp_sum(alpha, 1'000'000, H, table));
    alpha += 1e-7;
  }
  state.SetItemsProcessed(state.iterations() * (H + 1));
}
BENCHMARK(BM_DivisorExpSum)->Arg(10'000)->Arg(100'000);

}  // namespace

BENCHMARK_MAIN();
