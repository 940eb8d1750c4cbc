#include "al/kernel.hpp"
#include "al/scoring.hpp"
#include "al/strategies.hpp"

#include <benchmark/benchmark.h>

#include <omp.h>

using namespace al;

namespace {

struct Setup {
    Dataset data;
    ActivePool pool;

    Setup(std::size_t n, std::size_t c)
        : data(synthetic_blobs(n, c, 1)),
          pool(build_kernel_matrix(data, default_kernel(FeatureKind::Numeric, n, 2)), c, data.labels, data) {
        for (std::size_t i = 0; i < 10; ++i) pool.acquire(i, data.labels[i]);
    }
};

void score(benchmark::State& state, StrategyKind kind, bool parallel) {
    Setup s(static_cast<std::size_t>(state.range(0)), 3);
    const auto view = s.pool.view();
    const auto& cands = s.pool.state().candidates();
    const StrategyConfig config{kind};
    for (auto _ : state) {
        auto scores = parallel ? score_candidates(config, view, cands)
                               : reference::score_candidates_serial(config, view, cands);
        benchmark::DoNotOptimize(scores.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cands.size()));
    state.counters["threads"] = parallel ? omp_get_max_threads() : 1;
}

void BM_XpalSerial(benchmark::State& s) { score(s, StrategyKind::Xpal, false); }
void BM_XpalOpenMP(benchmark::State& s) { score(s, StrategyKind::Xpal, true); }
void BM_EerSerial(benchmark::State& s) { score(s, StrategyKind::Eer, false); }
void BM_EerOpenMP(benchmark::State& s) { score(s, StrategyKind::Eer, true); }

void kernel(benchmark::State& state, bool parallel) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto data = synthetic_blobs(n, 3, 1);
    const auto spec = default_kernel(FeatureKind::Numeric, n, 2);
    for (auto _ : state)
        benchmark::DoNotOptimize(parallel ? build_kernel_matrix(data, spec) : reference::build_kernel_matrix_serial(data, spec));
}

void BM_KernelSerial(benchmark::State& s) { kernel(s, false); }
void BM_KernelOpenMP(benchmark::State& s) { kernel(s, true); }

}  // namespace

BENCHMARK(BM_XpalSerial)->Arg(250)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_XpalOpenMP)->Arg(250)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EerSerial)->Arg(250)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EerOpenMP)->Arg(250)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_KernelSerial)->Arg(500)->Arg(1500)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_KernelOpenMP)->Arg(500)->Arg(1500)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
