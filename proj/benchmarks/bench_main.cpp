#include <benchmark/benchmark.h>

#include <random>

#include <ckgraph/classify.hpp>
#include <ckgraph/desourcify.hpp>
#include <ckgraph/families.hpp>
#include <ckgraph/groupoid.hpp>
#include <ckgraph/kclassify.hpp>
#include <ckgraph/kgraph.hpp>

using namespace ckgraph;

namespace {

DirectedGraph random_digraph(std::mt19937& rng, int n, int m) {
    DirectedGraph g;
    for (int v = 0; v < n; ++v) g.add_vertex("v" + std::to_string(v));
    std::uniform_int_distribution<int> pick(0, n - 1);
    for (int e = 0; e < m; ++e) g.add_edge("e" + std::to_string(e), pick(rng), pick(rng));
    return g;
}

void classify_random(benchmark::State& state) {
    std::mt19937 rng(1);
    auto n = static_cast<int>(state.range(0));
    auto g = random_digraph(rng, n, 2 * n);
    for (auto _ : state) benchmark::DoNotOptimize(classify_digraph(g));
}
BENCHMARK(classify_random)->Arg(8)->Arg(64)->Arg(512);

void classify_staged(benchmark::State& state) {
    auto fam = digraph_family("thesis:2times");
    for (auto _ : state) benchmark::DoNotOptimize(classify_digraph(as_graph(fam.graph)));
}
BENCHMARK(classify_staged);

void classify_robertson(benchmark::State& state) {
    auto g = robertson();
    for (auto _ : state) benchmark::DoNotOptimize(classify_kgraph(g));
}
BENCHMARK(classify_robertson);

void profile(benchmark::State& state) {
    auto f = sequence_family("ktimes:" + std::to_string(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(multiplicity_profile(f));
}
BENCHMARK(profile)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void witness_check(benchmark::State& state) {
    auto f = sequence_family("nonhausdorff");
    const auto& lim = f.limits.at(0);
    for (auto _ : state) benchmark::DoNotOptimize(k_times_witness_check(f, lim, lim.witnesses));
}
BENCHMARK(witness_check)->Unit(benchmark::kMillisecond);

void truncation(benchmark::State& state) {
    auto g = robertson();
    auto b = state.range(0);
    for (auto _ : state) benchmark::DoNotOptimize(materialize_truncation(g, {b, b}, 3));
}
BENCHMARK(truncation)->Arg(2)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
