#include <benchmark/benchmark.h>

#include "gsgd/diagnostics.hpp"
#include "gsgd/rng.hpp"

namespace {

using namespace gsgd;

void BM_min_norm_vertices(benchmark::State& state) {
    const std::size_t count = static_cast<std::size_t>(state.range(0));
    Rng rng(11);
    HullDescription hull;
    hull.dimension = 8;
    for (std::size_t i = 0; i < count; ++i) {
        RealVector v(8);
        for (double& c : v) c = rng.uniform(-1.0, 2.0);
        hull.vertices.push_back(v);
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(min_norm_in_hull(hull).norm);
    }
}

void BM_min_norm_zonotope(benchmark::State& state) {
    const std::size_t generators = static_cast<std::size_t>(state.range(0));
    Rng rng(12);
    HullStructure hs;
    hs.offset.assign(8, 0.5);
    for (std::size_t i = 0; i < generators; ++i) {
        RealVector g(8);
        for (double& c : g) c = rng.uniform(-0.3, 0.3);
        hs.generators.push_back(g);
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(min_norm_over_structures(std::span(&hs, 1)).norm);
    }
}

}  // namespace

BENCHMARK(BM_min_norm_vertices)->Arg(8)->Arg(64)->Arg(512)->Arg(4096);
BENCHMARK(BM_min_norm_zonotope)->Arg(4)->Arg(12)->Arg(24)->Arg(48);
