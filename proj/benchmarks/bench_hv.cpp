#include <benchmark/benchmark.h>

#include "hdmole/hypervector.hpp"

using namespace hdmole;

static void BM_RandomHv(benchmark::State& state) {
  const auto dim = static_cast<std::size_t>(state.range(0));
  std::uint64_t index = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(random_hv(Seed{1}, index++, dim));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RandomHv)->Arg(10000);

static void BM_Bundle(benchmark::State& state) {
  const auto dim = static_cast<std::size_t>(state.range(0));
  const Hypervector a = random_hv(Seed{1}, 0, dim);
  const Hypervector b = random_hv(Seed{1}, 1, dim);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bundle(a, b));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Bundle)->Arg(10000);

static void BM_Bind(benchmark::State& state) {
  const auto dim = static_cast<std::size_t>(state.range(0));
  const Hypervector a = random_hv(Seed{1}, 0, dim);
  const Hypervector b = random_hv(Seed{1}, 1, dim);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bind(a, b));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Bind)->Arg(10000);

static void BM_Permute(benchmark::State& state) {
  const auto dim = static_cast<std::size_t>(state.range(0));
  const Hypervector a = random_hv(Seed{1}, 0, dim);
  std::size_t k = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(permute(a, k++));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Permute)->Arg(10000);

static void BM_Cosine(benchmark::State& state) {
  const auto dim = static_cast<std::size_t>(state.range(0));
  const Hypervector a = random_hv(Seed{1}, 0, dim);
  const Hypervector b = random_hv(Seed{1}, 1, dim);
  for (auto _ : state) {
    benchmark::DoNotOptimize(cosine(a, b));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Cosine)->Arg(10000);
