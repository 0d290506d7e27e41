#include <benchmark/benchmark.h>

#include "gsgd/optimizer.hpp"
#include "gsgd/problems.hpp"

namespace {

using namespace gsgd;

GsgdConfig bench_config(Method method) {
    GsgdConfig cfg;
    cfg.method = method;
    cfg.schedule.regime = Regime::single;
    cfg.schedule.eta_rule = EtaRule::power;
    cfg.schedule.eta0 = 0.05;
    cfg.schedule.exponent = 0.5;
    cfg.seed = 7;
    return cfg;
}

void BM_method_step(benchmark::State& state, Method method) {
    const SyntheticData data = generate_synthetic({32, 16, 3, 0.0});
    const auto problem = make_l1_regression(data.a, data.b);
    const GsgdConfig cfg = bench_config(method);
    OptimizerState st(RealVector(16, 0.5), RealVector(16, 0.0), cfg.seed);
    for (auto _ : state) {
        step(*problem, st, cfg);
        benchmark::DoNotOptimize(st.x.data());
    }
    state.SetItemsProcessed(state.iterations());
}

void BM_full_selection(benchmark::State& state) {
    const SyntheticData data = generate_synthetic({64, 16, 3, 0.0});
    const auto problem = make_l1_regression(data.a, data.b);
    const RealVector x(16, 0.25);
    for (auto _ : state) {
        benchmark::DoNotOptimize(problem->selection(x));
    }
}

}  // namespace

BENCHMARK_CAPTURE(BM_method_step, heavy_ball, gsgd::Method::heavy_ball);
BENCHMARK_CAPTURE(BM_method_step, signsgd, gsgd::Method::signsgd);
BENCHMARK_CAPTURE(BM_method_step, lion, gsgd::Method::lion);
BENCHMARK_CAPTURE(BM_method_step, normalized, gsgd::Method::normalized);
BENCHMARK_CAPTURE(BM_method_step, clipped, gsgd::Method::clipped);
BENCHMARK(BM_full_selection);
