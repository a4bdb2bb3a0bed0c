#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "fast/kernels.hpp"
#include "fast/pipeline.hpp"
#include "fast/synth_bench.hpp"

using namespace fast;

namespace {

std::vector<double> random_rows(std::size_t rows, std::size_t h) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> v(rows * h);
    for (auto& x : v) x = u(rng);
    return v;
}

std::vector<std::vector<TokenId>> random_streams(std::size_t n, std::size_t len) {
    std::mt19937_64 rng(2);
    std::binomial_distribution<TokenId> sym(254, 0.5);
    std::vector<std::vector<TokenId>> out(n, std::vector<TokenId>(len));
    for (auto& s : out) {
        for (auto& x : s) x = sym(rng);
    }
    return out;
}

template <void (*Kernel)(const kernels::CosineTable&, std::span<const double>, std::span<double>)>
void BM_dct_rows(benchmark::State& state) {
    const auto rows = static_cast<std::size_t>(state.range(0));
    const auto h = static_cast<std::size_t>(state.range(1));
    const auto& table = kernels::cosine_table(h);
    const auto in = random_rows(rows, h);
    std::vector<double> out(in.size());
    for (auto _ : state) {
        Kernel(table, in, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(rows));
}

template <kernels::PairCounts (*Count)(const std::vector<std::vector<TokenId>>&,
                                       std::span<const std::int64_t>)>
void BM_count_pairs(benchmark::State& state) {
    const auto streams = random_streams(static_cast<std::size_t>(state.range(0)), 700);
    const std::vector<std::int64_t> weights(streams.size(), 1);
    for (auto _ : state) {
        auto counts = Count(streams, weights);
        benchmark::DoNotOptimize(counts.size());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_encode_batch(benchmark::State& state) {
    const auto corpus = gen_spline_corpus(SplineCorpusParams{1000, 0, 14}, 50);
    const auto model = fast_fit(corpus);
    for (auto _ : state) {
        auto tokens = fast_encode_batch(corpus.chunks, model);
        benchmark::DoNotOptimize(tokens.data());
    }
    state.SetItemsProcessed(state.iterations() * 1000);
}

}  // namespace

BENCHMARK(BM_dct_rows<kernels::serial::dct2_rows>)->Name("dct2_rows/serial")
    ->Args({14, 50})->Args({32, 256})->Args({32, 800});
BENCHMARK(BM_dct_rows<kernels::omp::dct2_rows>)->Name("dct2_rows/omp")
    ->Args({14, 50})->Args({32, 256})->Args({32, 800});
BENCHMARK(BM_dct_rows<kernels::serial::dct3_rows>)->Name("dct3_rows/serial")
    ->Args({14, 50})->Args({32, 800});
BENCHMARK(BM_dct_rows<kernels::omp::dct3_rows>)->Name("dct3_rows/omp")
    ->Args({14, 50})->Args({32, 800});
BENCHMARK(BM_count_pairs<kernels::serial::count_pairs>)->Name("count_pairs/serial")
    ->Arg(1000)->Arg(10000);
BENCHMARK(BM_count_pairs<kernels::omp::count_pairs>)->Name("count_pairs/omp")
    ->Arg(1000)->Arg(10000);
BENCHMARK(BM_encode_batch)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
