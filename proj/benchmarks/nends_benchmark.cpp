// Obfuscation cost: exhaustive tree search against the linear zigzag rule,
// across neighborhood sizes and column lengths.
#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "privleak/nends.hpp"

namespace {

std::vector<double> random_column(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(0.0, 1000.0);
    std::vector<double> column(n);
    for (double& v : column) v = dist(rng);
    return column;
}

void bm_single_neighborhood_tree(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const std::vector<double> column = random_column(m, 42);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            privleak::apply_nends(column, m, privleak::CycleMethod::Tree));
    }
}
BENCHMARK(bm_single_neighborhood_tree)->DenseRange(3, 10);

void bm_single_neighborhood_zigzag(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const std::vector<double> column = random_column(m, 42);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            privleak::apply_nends(column, m, privleak::CycleMethod::Zigzag));
    }
}
BENCHMARK(bm_single_neighborhood_zigzag)->DenseRange(3, 10);

void bm_column_tree(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const std::vector<double> column = random_column(n, 7);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            privleak::apply_nends(column, 5, privleak::CycleMethod::Tree));
    }
}
BENCHMARK(bm_column_tree)->Arg(25)->Arg(200)->Arg(800)->Arg(3200);

void bm_column_zigzag(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const std::vector<double> column = random_column(n, 7);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            privleak::apply_nends(column, 5, privleak::CycleMethod::Zigzag));
    }
}
BENCHMARK(bm_column_zigzag)->Arg(25)->Arg(200)->Arg(800)->Arg(3200);

}  // namespace

BENCHMARK_MAIN();
