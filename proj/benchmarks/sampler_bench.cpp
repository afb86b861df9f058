#include <vector>

#include <benchmark/benchmark.h>

#include "snc/extremal.hpp"
#include "snc/rng.hpp"
#include "snc/sampler.hpp"
#include "snc/sncp_mc.hpp"

namespace {

void BM_GeneralizedGaussian(benchmark::State& state) {
  const double p = static_cast<double>(state.range(0)) / 2.0;
  const snc::GeneralizedGaussian g(p);
  snc::Xoshiro256pp rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(g(rng));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_GeneralizedGaussian)->Arg(2)->Arg(3)->Arg(4)->Arg(6);

void BM_Cone(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  std::uint64_t index = 0;
  for (auto _ : state) benchmark::DoNotOptimize(snc::sample_cone(1.5, m, {1, index++}, 1024));
  state.SetItemsProcessed(state.iterations() * 1024);
}
BENCHMARK(BM_Cone)->Arg(10)->Arg(100);

void BM_DiagMc(benchmark::State& state) {
  const auto pair = snc::OrthoPair::diagonal_xi(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(snc::f_diag_mc(3.0, pair, {65536, 42, 1}));
  state.SetItemsProcessed(state.iterations() * 65536);
}
BENCHMARK(BM_DiagMc)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_ExtremalValues(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(snc::f_diag_extremal_values(1.5, 100, snc::ExtremalPair::xi, {65536, 42, 1}));
  state.SetItemsProcessed(state.iterations() * 65536);
}
BENCHMARK(BM_ExtremalValues)->Unit(benchmark::kMillisecond);

void BM_MaximizeOverlap(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(snc::maximize_overlap(n, snc::PairMode::diagonal, 1, 42));
}
BENCHMARK(BM_MaximizeOverlap)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
