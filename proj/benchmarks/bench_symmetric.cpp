#include <benchmark/benchmark.h>

#include "bench_common.hpp"
#include "tarifflab/symmetric.hpp"

using namespace tarifflab;

static void BM_SolveBq(benchmark::State& state) {
    SymmetricInstance inst{2, bench::two_item_product(), Matroid::uniform(2, 1)};
    Rat eps(1, static_cast<long>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_bq(inst, eps).objective);
    }
}
BENCHMARK(BM_SolveBq)->Arg(16)->Arg(64);

static void BM_BundleBranch(benchmark::State& state) {
    SymmetricInstance inst{2, bench::two_item_product(), Matroid::uniform(2, 1)};
    for (auto _ : state) {
        benchmark::DoNotOptimize(bundle_branch(inst, 2000, 11).fee);
    }
}
BENCHMARK(BM_BundleBranch);
