#include <benchmark/benchmark.h>

#include "dgff/box_spectral.hpp"
#include "dgff/brw.hpp"
#include "dgff/green.hpp"
#include "dgff/network.hpp"
#include "dgff/sampler.hpp"

using namespace dgff;

static void BM_GreenMatrix(benchmark::State& state)
{
    LatticeDomain d = make_box(int(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(green_matrix(d).matrix().data());
}
BENCHMARK(BM_GreenMatrix)->Arg(8)->Arg(16)->Arg(24)->Unit(benchmark::kMillisecond);

static void BM_BoxSpectralSample(benchmark::State& state)
{
    BoxSpectral b(int(state.range(0)) - 1);
    Rng rng(1);
    for (auto _ : state) benchmark::DoNotOptimize(b.sample(rng).data());
    state.SetItemsProcessed(state.iterations() * (state.range(0) - 1) * (state.range(0) - 1));
}
BENCHMARK(BM_BoxSpectralSample)->Arg(64)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

static void BM_HierarchicalSample(benchmark::State& state)
{
    HierarchicalSampler h(int(state.range(0)));
    Rng rng(2);
    for (auto _ : state) benchmark::DoNotOptimize(h.sample(rng).values().data());
}
BENCHMARK(BM_HierarchicalSample)->Arg(5)->Arg(7)->Arg(9)->Unit(benchmark::kMillisecond);

static void BM_EffectiveResistance(benchmark::State& state)
{
    const int N = int(state.range(0));
    Rng rng(3);
    Network net = from_field(FieldSampler(make_box(N)).sample(rng), 1.0);
    const int v = int(net.size()) - 1;
    for (auto _ : state) benchmark::DoNotOptimize(effective_resistance(net, 0, v).R);
}
BENCHMARK(BM_EffectiveResistance)->Arg(16)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

static void BM_BrwMax(benchmark::State& state)
{
    Rng rng(4);
    const int n = int(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(sample_brw_max(4, n, rng));
}
BENCHMARK(BM_BrwMax)->Arg(6)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
