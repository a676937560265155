// Microbenchmarks for the blocked engine and the naive oracles.
// Run: ./fkde_benchmarks [--benchmark_filter=...]

#include <benchmark/benchmark.h>

#include "fkde/engine.hpp"
#include "fkde/oracle.hpp"
#include "fkde/rng.hpp"
#include "fkde/types.hpp"

namespace {

fkde::SampleSet gaussian_points(std::size_t n, std::size_t d, std::uint64_t seed) {
    fkde::SampleSet s = fkde::SampleSet::zeros(n, d);
    fkde::Rng rng(seed);
    for (auto& v : s.values) {
        v = rng.normal();
    }
    return s;
}

double bandwidth_for(std::size_t d) {
    return 0.8 * std::sqrt(static_cast<double>(d));
}

void BM_pairwise_block(benchmark::State& state) {
    const std::size_t m = static_cast<std::size_t>(state.range(0));
    const std::size_t n = static_cast<std::size_t>(state.range(1));
    const std::size_t d = 16;
    const auto a = gaussian_points(m, d, 1);
    const auto b = gaussian_points(n, d, 2);
    std::vector<double> out(m * n);
    for (auto _ : state) {
        fkde::engine::pairwise_sq_dists_block(a.data(), m, b.data(), n, d, out.data());
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) * m * n);
}
BENCHMARK(BM_pairwise_block)->Args({64, 1024})->Args({256, 4096});

void BM_kde_flash(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const std::size_t d = static_cast<std::size_t>(state.range(1));
    const auto train = gaussian_points(n, d, 3);
    const auto queries = gaussian_points(n / 8, d, 4);
    const auto plan = fkde::engine::TilePlan::make(queries.n, n, 64, 1024);
    const double h = bandwidth_for(d);
    for (auto _ : state) {
        auto r = fkde::engine::kde_flash(train, queries, h, fkde::KernelKind::Gaussian, true,
                                         plan);
        benchmark::DoNotOptimize(r.values.data());
    }
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) * n * (n / 8));
}
BENCHMARK(BM_kde_flash)->Args({8192, 1})->Args({8192, 16})->Args({32768, 16});

void BM_kde_naive(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const std::size_t d = static_cast<std::size_t>(state.range(1));
    const auto train = gaussian_points(n, d, 3);
    const auto queries = gaussian_points(n / 8, d, 4);
    const double h = bandwidth_for(d);
    for (auto _ : state) {
        auto r = fkde::oracle::kde_naive(train, queries, h);
        benchmark::DoNotOptimize(r.values.data());
    }
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) * n * (n / 8));
}
BENCHMARK(BM_kde_naive)->Args({8192, 1})->Args({8192, 16});

void BM_score_flash(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const std::size_t tile_m = static_cast<std::size_t>(state.range(1));
    const std::size_t tile_n = static_cast<std::size_t>(state.range(2));
    const std::size_t d = 16;
    const auto train = gaussian_points(n, d, 5);
    const auto plan = fkde::engine::TilePlan::make(n, n, tile_m, tile_n);
    const double hs = bandwidth_for(d);
    for (auto _ : state) {
        auto s = fkde::engine::score_flash(train, hs, plan);
        benchmark::DoNotOptimize(s.values.data());
    }
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) * n * n);
}
BENCHMARK(BM_score_flash)
    ->Args({8192, 64, 1024})
    ->Args({8192, 32, 256})
    ->Args({8192, 256, 1024})
    ->Args({32768, 64, 1024});

void BM_sdkde_flash(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const std::size_t d = static_cast<std::size_t>(state.range(1));
    const auto train = gaussian_points(n, d, 6);
    const auto queries = gaussian_points(n / 8, d, 7);
    const auto plan = fkde::engine::TilePlan::make(queries.n, n, 64, 1024);
    const fkde::Bandwidth bw = fkde::Bandwidth::uniform(bandwidth_for(d));
    for (auto _ : state) {
        auto r = fkde::engine::sdkde_flash(train, queries, bw, plan);
        benchmark::DoNotOptimize(r.values.data());
    }
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) * n * n);
}
BENCHMARK(BM_sdkde_flash)->Args({8192, 16})->Args({32768, 16});

void BM_sdkde_naive(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const std::size_t d = static_cast<std::size_t>(state.range(1));
    const auto train = gaussian_points(n, d, 6);
    const auto queries = gaussian_points(n / 8, d, 7);
    const fkde::Bandwidth bw = fkde::Bandwidth::uniform(bandwidth_for(d));
    for (auto _ : state) {
        auto r = fkde::oracle::sdkde_naive(train, queries, bw);
        benchmark::DoNotOptimize(r.values.data());
    }
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) * n * n);
}
BENCHMARK(BM_sdkde_naive)->Args({4096, 16})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
