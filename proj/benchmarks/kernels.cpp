#include <benchmark/benchmark.h>

#include <cstdint>

#include "hweyl/hweyl.hpp"

namespace {

void BM_RPsi(benchmark::State& state) {
  const hweyl::ManifoldParams p(1);
  double x = static_cast<double>(state.range(0)) + 0.37;
  for (auto _ : state) {
    benchmark::DoNotOptimize(hweyl::r_psi(p, x));
    x += 1.0;
  }
}
BENCHMARK(BM_RPsi)->Arg(10000)->Arg(1000000)->Arg(100000000);

void BM_ExactCount(benchmark::State& state) {
  const hweyl::ManifoldParams p(1);
  const double x = static_cast<double>(state.range(0)) + 0.5;
  for (auto _ : state) benchmark::DoNotOptimize(hweyl::n_ii_exact(p, x));
}
BENCHMARK(BM_ExactCount)->Arg(10000)->Arg(1000000);

void BM_TauTable(benchmark::State& state) {
  for (auto _ : state) {
    hweyl::TauTable t(1, state.range(0), hweyl::TauEndpoint::half);
    benchmark::DoNotOptimize(t.values().data());
  }
}
BENCHMARK(BM_TauTable)->Arg(4096)->Arg(100000)->Unit(benchmark::kMicrosecond);

void BM_SeriesKernel(benchmark::State& state) {
  const hweyl::TauTable t(1, 8192);
  const int k = static_cast<int>(state.range(0));
  const double y = static_cast<double>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(hweyl::s_kv(t.values(), k, 1, y).value);
}
BENCHMARK(BM_SeriesKernel)->Args({2, 4096})->Args({3, 4096})->Args({4, 1024})->Unit(benchmark::kMillisecond);

void BM_SeriesMeetInTheMiddle(benchmark::State& state) {
  const hweyl::TauTable t(1, 512);
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        hweyl::s_kv(t.values(), k, 1, 128.0, hweyl::SeriesMethod::meet_in_the_middle).value);
  }
}
BENCHMARK(BM_SeriesMeetInTheMiddle)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_CosineExpansion(benchmark::State& state) {
  const auto y = static_cast<std::int64_t>(state.range(0));
  const hweyl::TauTable t(1, y, hweyl::TauEndpoint::half);
  const hweyl::CosineExpansion f1(hweyl::ExpansionParams(1, static_cast<double>(y)), t);
  double x = 1e5 + 0.25;
  for (auto _ : state) {
    benchmark::DoNotOptimize(f1(x));
    x += 0.77;
  }
}
BENCHMARK(BM_CosineExpansion)->Arg(256)->Arg(4096);

}  // namespace

BENCHMARK_MAIN();
