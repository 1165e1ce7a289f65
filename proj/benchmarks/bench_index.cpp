#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "gknn/reductions.hpp"

using namespace gknn;

namespace {

struct Scene {
    std::vector<Point3> data;
    std::vector<Point3> queries;
};

std::vector<Point3> uniform(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Point3> out(n);
    for (auto& p : out) p = {u(rng), u(rng), u(rng)};
    return out;
}

const Scene& dataset(std::size_t n) {
    static std::vector<std::pair<std::size_t, Scene>> cache;
    for (const auto& [size, d] : cache) {
        if (size == n) return d;
    }
    std::mt19937_64 rng(17);
    Scene s;
    s.data = uniform(rng, n);
    s.queries = uniform(rng, 256);
    cache.emplace_back(n, std::move(s));
    return cache.back().second;
}

ReductionConfig config(MetricSpec metric, bool enhanced) {
    ReductionConfig c;
    c.metric = metric;
    c.radius = 0.05;
    c.k = 10;
    c.enhanced = enhanced;
    return c;
}

void BM_Build(benchmark::State& state) {
    const auto& d = dataset(static_cast<std::size_t>(state.range(0)));
    const auto prims = make_primitives(d.data, 0.05);
    for (auto _ : state) {
        Bvh bvh = Bvh::build(prims, Bvh::kDefaultLeafSize);
        benchmark::DoNotOptimize(bvh.nodes().data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Build)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

// range(1): 0 = L1, 1 = L3, 2 = Linf; range(2): enhanced flag.
void BM_Query(benchmark::State& state) {
    const auto& d = dataset(static_cast<std::size_t>(state.range(0)));
    const MetricSpec metrics[] = {MetricSpec::l1(), MetricSpec::lp(3), MetricSpec::linf()};
    const LpIndex index(d.data, config(metrics[state.range(1)], state.range(2) != 0));
    std::size_t candidates = 0;
    for (auto _ : state) {
        for (const Point3& q : d.queries) {
            const QueryResult r = index.query(q);
            candidates += r.candidate_count;
            benchmark::DoNotOptimize(r.neighbors.data());
        }
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(d.queries.size()));
    state.counters["candidates/query"] =
        static_cast<double>(candidates) / static_cast<double>(state.iterations() * d.queries.size());
}
BENCHMARK(BM_Query)
    ->ArgNames({"n", "metric", "enhanced"})
    ->ArgsProduct({{100000}, {0, 1, 2}, {0, 1}})
    ->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
