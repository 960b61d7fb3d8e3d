#include <benchmark/benchmark.h>

#include "campana/enumerate.hpp"
#include "campana/model_io.hpp"
#include "campana/oracle.hpp"

namespace {

using namespace campana;

const char* kHalvesText = R"(
ambient_dim = 1
[[component]]
form = [[1, [1, 0]]]
weight = "1/2"
[[component]]
form = [[1, [0, 1]]]
weight = "1/2"
)";

const char* kFiveLinesText = R"(
ambient_dim = 1
[[component]]
form = [[1, [1, 0]]]
weight = "1/2"
[[component]]
form = [[1, [0, 1]]]
weight = "1/2"
[[component]]
form = [[1, [1, 0]], [-1, [0, 1]]]
weight = "1/2"
[[component]]
form = [[1, [1, 0]], [1, [0, 1]]]
weight = "1/2"
[[component]]
form = [[1, [1, 0]], [-2, [0, 1]]]
weight = "1/2"
)";

void BM_point_stream_p1(benchmark::State& state) {
    const auto bound = state.range(0);
    std::int64_t points = 0;
    for (auto _ : state) {
        points = 0;
        for_each_point(1, bound, [&](std::span<const std::int64_t> p) {
            benchmark::DoNotOptimize(p.data());
            ++points;
        });
    }
    state.SetItemsProcessed(state.iterations() * points);
}
BENCHMARK(BM_point_stream_p1)->Arg(256)->Arg(1024)->Arg(4096);

void BM_classify_sweep(benchmark::State& state, const char* model_text) {
    const auto m = parse_model_text(model_text);
    const std::int64_t bound = state.range(0);
    const SweepClassifier classifier(m, bound);
    std::int64_t points = 0;
    for (auto _ : state) {
        points = 0;
        for_each_point_in_range(1, 1, bound, [&](std::span<const std::int64_t> p) {
            benchmark::DoNotOptimize(classifier.classify_point(p));
            ++points;
        });
    }
    state.SetItemsProcessed(state.iterations() * points);
}
BENCHMARK_CAPTURE(BM_classify_sweep, halves, kHalvesText)->Arg(512)->Arg(2048);
BENCHMARK_CAPTURE(BM_classify_sweep, five_lines, kFiveLinesText)->Arg(512)->Arg(2048);

void BM_count_campana(benchmark::State& state) {
    const auto m = parse_model_text(kHalvesText);
    CountOptions opts;
    opts.threads = static_cast<int>(state.range(1));
    for (auto _ : state) {
        benchmark::DoNotOptimize(count_campana(m, state.range(0), opts));
    }
}
BENCHMARK(BM_count_campana)->Args({2048, 1})->Args({2048, 2});

void BM_factorize_i64(benchmark::State& state) {
    SpfSieve sieve(1 << 20);
    std::int64_t v = 3;
    for (auto _ : state) {
        SmallFactors f;
        factorize_i64(v, &sieve, f);
        benchmark::DoNotOptimize(f);
        v = v % 1048573 + 3;
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_factorize_i64);

void BM_factorize_semiprime(benchmark::State& state) {
    const BigInt n = BigInt("1000000007") * BigInt("1000000009");
    for (auto _ : state) {
        benchmark::DoNotOptimize(factorize(n));
    }
}
BENCHMARK(BM_factorize_semiprime);

void BM_logsum_compare_mixed(benchmark::State& state) {
    // mixed-sign difference forces the high-precision fallback
    const auto lhs = LogSum::log_of(2, Rational(3, 2)) + LogSum::log_of(3);
    const auto rhs = LogSum::log_of(3, 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(LogSum::compare(lhs, rhs));
    }
}
BENCHMARK(BM_logsum_compare_mixed);

void BM_cross_validate_halves(benchmark::State& state) {
    const auto m = parse_model_text(kHalvesText);
    for (auto _ : state) {
        benchmark::DoNotOptimize(cross_validate(m, state.range(0), OracleKind::SquarefullPairs, 2));
    }
}
BENCHMARK(BM_cross_validate_halves)->Arg(1024);

}  // namespace

BENCHMARK_MAIN();
