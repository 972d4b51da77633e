// Serial reference kernels against their OpenMP counterparts.
// Arguments: image side, then worker count for the parallel variants.

#include "airseg/engine.hpp"
#include "airseg/entropy.hpp"
#include "airseg/morphology.hpp"

#include <benchmark/benchmark.h>

#include <algorithm>
#include <random>

using namespace airseg;

namespace {

GrayImage test_image(std::size_t side) {
    std::mt19937_64 rng(side);
    std::normal_distribution<double> noise(0.0, 12.0);
    GrayImage img(side, side);
    for (std::size_t y = 0; y < side; ++y) {
        for (std::size_t x = 0; x < side; ++x) {
            const double base = ((x / 32 + y / 32) % 2 == 0) ? 70.0 : 170.0;
            img.at(y, x) = static_cast<std::uint8_t>(std::clamp(base + noise(rng), 0.0, 255.0));
        }
    }
    return img;
}

entropy::Histogram2D test_histogram(std::size_t side) {
    const auto f = test_image(side);
    return entropy::histogram2d(f, entropy::average_image(f));
}

void BM_SearchSerial(benchmark::State& state) {
    const auto h = test_histogram(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(entropy::find_threshold(h, {}));
    }
}

void BM_SearchParallel(benchmark::State& state) {
    const auto h = test_histogram(static_cast<std::size_t>(state.range(0)));
    const engine::ParallelConfig cfg{static_cast<std::size_t>(state.range(1)), 4096};
    for (auto _ : state) {
        benchmark::DoNotOptimize(engine::find_threshold(h, {}, cfg));
    }
}

void BM_HistogramSerial(benchmark::State& state) {
    const auto f = test_image(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        const auto g = entropy::average_image(f);
        benchmark::DoNotOptimize(entropy::histogram2d(f, g));
    }
}

void BM_HistogramParallel(benchmark::State& state) {
    const auto f = test_image(static_cast<std::size_t>(state.range(0)));
    const engine::ParallelConfig cfg{static_cast<std::size_t>(state.range(1)), 32};
    for (auto _ : state) {
        const auto g = engine::average_image(f, cfg);
        benchmark::DoNotOptimize(engine::histogram2d(f, g, 256, cfg));
    }
}

void BM_Opening(benchmark::State& state) {
    const auto f = test_image(static_cast<std::size_t>(state.range(0)));
    const auto se = morph::disk(10);
    for (auto _ : state) {
        benchmark::DoNotOptimize(morph::open(f, se));
    }
}

void parallel_args(benchmark::internal::Benchmark* b) {
    for (const int side : {128, 512}) {
        for (const int workers : {1, 2, 4, 8}) {
            b->Args({side, workers});
        }
    }
}

} // namespace

BENCHMARK(BM_SearchSerial)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SearchParallel)->Apply(parallel_args)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_HistogramSerial)->Arg(128)->Arg(512)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_HistogramParallel)->Apply(parallel_args)->Unit(benchmark::kMicrosecond)->UseRealTime();
BENCHMARK(BM_Opening)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
