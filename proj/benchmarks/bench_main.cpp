#include <benchmark/benchmark.h>

#include <vector>

#include "geonorm/geonorm.hpp"

namespace {

using namespace geonorm;

void bm_pdf(benchmark::State& state) {
    const GnParams p(Angle(2.1), static_cast<double>(state.range(0)));
    const Angle at(2.6);
    for (auto _ : state) {
        benchmark::DoNotOptimize(pdf(at, p));
    }
}
BENCHMARK(bm_pdf)->Arg(1)->Arg(100);

void bm_trig_moment(benchmark::State& state) {
    const GnParams p(Angle(0.7), 2.0);
    const int order = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(trig_moment(order, p));
    }
}
BENCHMARK(bm_trig_moment)->Arg(1)->Arg(4)->Arg(8);

void bm_sample(benchmark::State& state) {
    const GnParams p(Angle(2.1), 5.0);
    RngStream rng(42);
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(sample(n, p, rng));
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(n));
}
BENCHMARK(bm_sample)->Arg(1000);

void bm_intrinsic_mean(benchmark::State& state) {
    const GnParams p(Angle(2.1), 1.0);
    RngStream rng(7);
    const std::vector<Angle> draws =
        sample(static_cast<std::size_t>(state.range(0)), p, rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(intrinsic_sample_mean(draws));
    }
}
BENCHMARK(bm_intrinsic_mean)->Arg(100)->Arg(1000)->Arg(10000);

void bm_mle_fit(benchmark::State& state) {
    const GnParams p(Angle(2.1), 1.0);
    RngStream rng(7);
    const std::vector<Angle> draws =
        sample(static_cast<std::size_t>(state.range(0)), p, rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit_gn_mle(draws));
    }
}
BENCHMARK(bm_mle_fit)->Arg(100)->Arg(1000);

void bm_variance_inversion(benchmark::State& state) {
    // round-trip V then V^-1 at a representative concentration
    for (auto _ : state) {
        const double v = intrinsic_variance(3.0);
        benchmark::DoNotOptimize(fisher_info(3.0));
        benchmark::DoNotOptimize(v);
    }
}
BENCHMARK(bm_variance_inversion);

} // namespace

BENCHMARK_MAIN();
