#include <benchmark/benchmark.h>

#include "vbp/audio.hpp"
#include "vbp/clustering.hpp"
#include "vbp/features.hpp"
#include "vbp/optimizer.hpp"
#include "vbp/rng.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace {

vbp::AudioClip make_voiced_clip(double seconds) {
    vbp::AudioClip clip;
    clip.sample_rate_hz = 16000;
    clip.id = "bench";
    const auto n = static_cast<std::size_t>(seconds * clip.sample_rate_hz);
    clip.samples.resize(n);
    vbp::Rng rng(7);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / clip.sample_rate_hz;
        clip.samples[i] = 0.6 * std::sin(2.0 * std::numbers::pi * 140.0 * t) +
                          0.25 * std::sin(2.0 * std::numbers::pi * 700.0 * t) +
                          0.05 * rng.normal();
    }
    return clip;
}

void bm_preprocess(benchmark::State& state) {
    const vbp::AudioClip clip = make_voiced_clip(1.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(vbp::preprocess(clip));
    }
}
BENCHMARK(bm_preprocess)->Unit(benchmark::kMillisecond);

void bm_extract_features(benchmark::State& state) {
    const vbp::AudioClip clip = vbp::preprocess(make_voiced_clip(1.0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(vbp::extract_feature_vector(clip));
    }
}
BENCHMARK(bm_extract_features)->Unit(benchmark::kMillisecond);

void bm_optimize_sphere(benchmark::State& state) {
    const vbp::FunctionObjective sphere([](std::span<const double> p) {
        double acc = 0.0;
        for (double v : p) acc += v * v;
        return acc;
    });
    vbp::FfiConfig cfg;
    cfg.dimension = static_cast<int>(state.range(0));
    cfg.bounds.assign(static_cast<std::size_t>(cfg.dimension), {-5.0, 5.0});
    cfg.population_size = 20;
    cfg.max_iterations = 100;
    cfg.seed = 42;
    for (auto _ : state) {
        benchmark::DoNotOptimize(vbp::optimize(sphere, cfg));
    }
}
BENCHMARK(bm_optimize_sphere)->Arg(2)->Arg(10)->Unit(benchmark::kMillisecond);

void bm_kmeans_batch(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    vbp::Rng rng(11);
    std::vector<std::vector<double>> data(n, std::vector<double>(8));
    for (std::size_t i = 0; i < n; ++i) {
        const double center = static_cast<double>(i % 3) * 4.0;
        for (double& v : data[i]) v = center + rng.normal();
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(vbp::kmeans_batch(data, 3, 100, 5));
    }
}
BENCHMARK(bm_kmeans_batch)->Arg(300)->Arg(3000)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
