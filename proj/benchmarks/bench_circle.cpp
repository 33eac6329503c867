#include <benchmark/benchmark.h>

#include "mdd/circle.hpp"

namespace {

void BM_Classify(benchmark::State& state) {
  const mdd::ArcParams params = mdd::ArcParams::from_eta(1'000'000, 0.02);
  double alpha = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mdd::classify(params, alpha));
    alpha += 1e-5;
    if (alpha >= 1.0) alpha -= 1.0;
  }
}
BENCHMARK(BM_Classify);

void BM_DirichletApprox(benchmark::State& state) {
  double alpha = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mdd::dirichlet_approx(alpha, state.range(0)));
    alpha += 1e-5;
    if (alpha >= 1.0) alpha -= 1.0;
  }
}
BENCHMARK(BM_DirichletApprox)->Arg(100)->Arg(10'000);

void BM_SineKernelTerm(benchmark::State& state) {
  const double T = 1.0 / 575.0;
  int64_t n = 1'000'100;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        mdd::sine_kernel_term(1, n, 1'000'000, 1000, T));
    if (++n > 1'001'000) n = 1'000'100;
  }
}
BENCHMARK(BM_SineKernelTerm);

void BM_MainTermSineKernel(benchmark::State& state) {
  const mdd::DigitSet ds(10, 7);
  const mdd::ArcParams params = mdd::ArcParams::from_eta(10'000, 0.02);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mdd::major_arc_main_term(
        ds, 10'000, 100, params, mdd::MainTermForm::SineKernel));
  }
}
BENCHMARK(BM_MainTermSineKernel);

}  // namespace

BENCHMARK_MAIN();
