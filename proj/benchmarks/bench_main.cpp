// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include <bgwi/exact.hpp>
#include <bgwi/laws.hpp>
#include <bgwi/rng.hpp>

namespace
{
void BM_SampleOffspring(benchmark::State& state)
{
    bgwi::LawTable const law(bgwi::canonical_mc_params(), bgwi::LawKind::offspring);
    bgwi::RngStream rng(1, 0);
    for (auto _ : state)
        benchmark::DoNotOptimize(bgwi::sample_offspring(rng, law));
}
BENCHMARK(BM_SampleOffspring);

void BM_SampleSibuya(benchmark::State& state)
{
    bgwi::RngStream rng(2, 0);
    for (auto _ : state)
        benchmark::DoNotOptimize(bgwi::sample_sibuya(rng, 0.9));
}
BENCHMARK(BM_SampleSibuya);

void BM_SampleOffspringTotal(benchmark::State& state)
{
    bgwi::LawTable const law(bgwi::canonical_mc_params(), bgwi::LawKind::offspring);
    bgwi::RngStream rng(3, 0);
    auto const parents = static_cast<bgwi::count_t>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(bgwi::sample_offspring_total(rng, law, parents));
}
BENCHMARK(BM_SampleOffspringTotal)->Arg(10)->Arg(1000)->Arg(100000);

void BM_ZeroHitTables(benchmark::State& state)
{
    auto const p = bgwi::canonical_exact_params();
    auto const n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(bgwi::zero_hit_tables(p, n));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ZeroHitTables)->RangeMultiplier(4)->Range(1 << 8, 1 << 14)
    ->Complexity(benchmark::oNSquared);

void BM_MeanderLaplace(benchmark::State& state)
{
    auto const p = bgwi::canonical_exact_params();
    auto const n = static_cast<std::size_t>(state.range(0));
    auto const tables = bgwi::zero_hit_tables(p, n + 1);
    for (auto _ : state)
        benchmark::DoNotOptimize(bgwi::meander_laplace(p, tables, n, 1.0, double(n) * double(n)));
}
BENCHMARK(BM_MeanderLaplace)->Arg(1000)->Arg(10000);
}  // namespace

BENCHMARK_MAIN();
