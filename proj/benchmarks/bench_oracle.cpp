#include <benchmark/benchmark.h>

#include "bench_common.hpp"
#include "tarifflab/oracle.hpp"

using namespace tarifflab;

static void BM_OptBicRevenue(benchmark::State& state) {
    ProductDist D = bench::two_item_product();
    Matroid F = Matroid::uniform(2, 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(opt_bic(D, F, std::nullopt, LpObjective::revenue).value);
    }
}
BENCHMARK(BM_OptBicRevenue);

static void BM_OptBicCapped(benchmark::State& state) {
    ProductDist D = bench::two_item_product();
    Matroid F = Matroid::uniform(2, 1);
    ExAnteConstraint c = make_ex_ante(D, {make_rat(1, 4), make_rat(1, 3)});
    for (auto _ : state) {
        benchmark::DoNotOptimize(opt_bic(D, F, c, LpObjective::revenue).value);
    }
}
BENCHMARK(BM_OptBicCapped);

static void BM_TariffGrid(benchmark::State& state) {
    ProductDist D = bench::two_item_product();
    Matroid F = Matroid::uniform(2, 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(grid_pricing_opt(D, F, PricingFamily::tariff).revenue);
    }
}
BENCHMARK(BM_TariffGrid);
