// Serial reference vs OpenMP shape kernel, and the two generators.
//
//   ./build/bench/bench_simulation --benchmark_counters_tabular=true

#include <benchmark/benchmark.h>

#include "jb/simulation.hpp"

namespace {

constexpr std::uint64_t kReplications = 20'000;
constexpr std::uint64_t kChunk = 1'000;

void BM_ShapesSerial(benchmark::State& state) {
    const auto n = state.range(0);
    for (auto _ : state) {
        auto draws = jb::reference::simulate_shapes(n, kReplications, 1, jb::Generator::CounterDefault, kChunk);
        benchmark::DoNotOptimize(draws.kurtosis.data());
    }
    state.counters["normals/s"] = benchmark::Counter(static_cast<double>(n * kReplications) * state.iterations(),
                                                     benchmark::Counter::kIsRate);
}

void BM_ShapesOpenMP(benchmark::State& state) {
    const auto n = state.range(0);
    jb::RunOptions options;
    options.workers = static_cast<int>(state.range(1));
    for (auto _ : state) {
        auto draws = jb::simulate_shapes(n, kReplications, 1, jb::Generator::CounterDefault, kChunk, options);
        benchmark::DoNotOptimize(draws.kurtosis.data());
    }
    state.counters["normals/s"] = benchmark::Counter(static_cast<double>(n * kReplications) * state.iterations(),
                                                     benchmark::Counter::kIsRate);
}

void BM_Generator(benchmark::State& state) {
    jb::Stream stream({7, 0, static_cast<jb::Generator>(state.range(0))});
    for (auto _ : state) benchmark::DoNotOptimize(stream.next_normal());
    state.SetLabel(std::string(jb::to_string(static_cast<jb::Generator>(state.range(0)))));
}

}  // namespace

BENCHMARK(BM_ShapesSerial)->Arg(10)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ShapesOpenMP)
    ->ArgsProduct({{10, 100, 1000}, {1, 2, 4, 8}})
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();
BENCHMARK(BM_Generator)->Arg(0)->Arg(1);

BENCHMARK_MAIN();
