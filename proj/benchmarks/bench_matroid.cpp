#include <benchmark/benchmark.h>

#include "bench_common.hpp"

using namespace tarifflab;

static void BM_MaxWeightBasis(benchmark::State& state) {
    Matroid M = Matroid::partition(8, {{0, 1, 2}, {3, 4}, {5, 6, 7}}, {2, 1, 2});
    std::vector<Rat> w;
    for (int j = 0; j < 8; ++j) w.push_back(make_rat(7 * j % 11, 3));
    for (auto _ : state) {
        benchmark::DoNotOptimize(max_weight_basis(M, w, full_set(8)));
    }
}
BENCHMARK(BM_MaxWeightBasis);

static void BM_UnionGreedy(benchmark::State& state) {
    Matroid M = Matroid::uniform(4, 2);
    std::vector<UnionElement> elems;
    for (int j = 0; j < 4; ++j)
        for (int z = 0; z < 16; ++z) elems.push_back({j, make_rat(64 - 4 * z - j, 8)});
    for (auto _ : state) {
        benchmark::DoNotOptimize(greedy_union_basis(M, 16, elems));
    }
}
BENCHMARK(BM_UnionGreedy);

static void BM_PolytopeMembership(benchmark::State& state) {
    Matroid M = Matroid::partition(12, {{0, 1, 2, 3}, {4, 5, 6, 7}, {8, 9, 10, 11}}, {2, 3, 1});
    std::vector<Rat> q(12, make_rat(1, 7));
    for (auto _ : state) {
        benchmark::DoNotOptimize(in_scaled_polytope(M, q, make_rat(1, 2)));
    }
}
BENCHMARK(BM_PolytopeMembership);
