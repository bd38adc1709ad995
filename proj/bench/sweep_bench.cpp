#include <random>

#include <benchmark/benchmark.h>

#include "rlct/structured_ss.hpp"
#include "rlct/sweep.hpp"

using namespace rlct;

namespace {

StructuredRealization random_plant(int n) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> nd;
  auto randn = [&](int r, int c) {
    MatrixXd M(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) M(i, j) = nd(rng);
    return M;
  };
  const int half = n / 2;
  return build_lct(randn(half, n - half), randn(half, 2), randn(n - half, 2));
}

void BM_FrequencySweepSerial(benchmark::State& state) {
  const StructuredRealization r = random_plant(static_cast<int>(state.range(0)));
  const auto w = logspace(1e-3, 1e3, 512);
  for (auto _ : state) benchmark::DoNotOptimize(frequency_sweep(r, w));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(w.size()));
}

void BM_FrequencySweepParallel(benchmark::State& state) {
  const StructuredRealization r = random_plant(static_cast<int>(state.range(0)));
  const auto w = logspace(1e-3, 1e3, 512);
  for (auto _ : state) benchmark::DoNotOptimize(frequency_sweep_parallel(r, w));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(w.size()));
}

}  // namespace

BENCHMARK(BM_FrequencySweepSerial)->Arg(8)->Arg(32)->Arg(128)->UseRealTime();
BENCHMARK(BM_FrequencySweepParallel)->Arg(8)->Arg(32)->Arg(128)->UseRealTime();

BENCHMARK_MAIN();
