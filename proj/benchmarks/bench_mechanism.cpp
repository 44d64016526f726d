#include <benchmark/benchmark.h>

#include "bench_common.hpp"
#include "tarifflab/mechanism.hpp"

using namespace tarifflab;

namespace {

SequentialTariff make_mech(int n) {
    SequentialTariff mech;
    for (int i = 0; i < n; ++i) {
        mech.order.push_back(i);
        mech.fees.push_back(make_rat(1, 2));
        mech.prices.push_back({Rat(4), Rat(7)});
        mech.limits.push_back(std::nullopt);
    }
    return mech;
}

}  // namespace

static void BM_SequentialExact(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    SequentialTariff mech = make_mech(n);
    std::vector<ProductDist> dists(n, bench::two_item_product());
    std::vector<Matroid> feas(n, Matroid::uniform(2, 1));
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_sequential_exact(mech, dists, feas).revenue);
    }
}
BENCHMARK(BM_SequentialExact)->Arg(2)->Arg(3);

static void BM_SequentialMonteCarlo(benchmark::State& state) {
    SequentialTariff mech = make_mech(3);
    std::vector<ProductDist> dists(3, bench::two_item_product());
    std::vector<Matroid> feas(3, Matroid::uniform(2, 1));
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_sequential_mc(mech, dists, feas, 1000, 7, 500).mean);
    }
}
BENCHMARK(BM_SequentialMonteCarlo);
