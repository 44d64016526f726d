#pragma once

#include <optional>
#include <vector>

#include "tarifflab/coretail.hpp"
#include "tarifflab/dist.hpp"
#include "tarifflab/matroid.hpp"
#include "tarifflab/mechanism.hpp"

namespace tarifflab {

// A priori identical agents: shared product distribution and constraint.
struct SymmetricInstance {
    int n = 1;
    ProductDist dist;
    Matroid feas;
};

struct QMixtureComponent {
    std::vector<Rat> q;
    Rat weight;
};

// Output of the quantile-grid solver. The expectation of the mixture lies in
// P_F intersected with the per-agent box; the objective is the exact expected
// value of sum_j q_j * sale_price_j(q_j) under the mixture.
struct BqSolution {
    std::vector<QMixtureComponent> components;
    std::vector<Rat> expected_q;
    Rat objective;
};

// Discretizes each item's quantile axis at step eps (truncated at 1/(2n)),
// weights grid cells by ironed virtual values and greedily selects a basis of
// the (1/eps)-fold matroid union. Non-regular items whose selected quantile
// falls inside an ironed interval are realized by mixing the interval
// endpoints; a single shared uniform draw couples the per-item mixes, so the
// component list stays short.
BqSolution solve_bq(const SymmetricInstance& inst, const Rat& epsilon);

struct BundleBranch {
    Rat fee;
    std::vector<Rat> prices;        // per item, the 1/(2n) ex ante prices
    double revenue_estimate = 0;    // empirical fee * acceptance probability
    double accept_estimate = 0;
    uint64_t samples = 0;
};

// Samples shifted bundle values and picks the empirically optimal fee over
// the sampled support. Deterministic given the seed.
BundleBranch bundle_branch(const SymmetricInstance& inst, uint64_t samples, uint64_t seed);

struct SymmetricSolution {
    int chosen_branch = 0;  // 0 = bundle fee branch, 1 = item pricing branch
    BqSolution bq;
    size_t chosen_component = 0;
    std::vector<Rat> q;          // realized ex ante vector of the chosen branch
    Rat fee;                     // per-agent entry fee before halving
    std::vector<Rat> prices;     // per-agent item prices of the chosen branch
    SequentialTariff mechanism;
    double bundle_estimate = 0;  // per-agent bundle branch revenue estimate
    Rat item_objective;          // exact grid objective of the item branch
    bool exact_eval = false;
    Rat exact_revenue;           // filled when exact_eval
    double est_revenue = 0;
    double est_sigma = 0;
};

// Builds both candidate sequential mechanisms (identical entry fee with
// 1/(2n)-quantile prices; zero-fee item pricing at the solver's ex ante
// prices), evaluates them, and returns the better one stitched with halved
// fees. General explicit constraints need a caller-supplied demand limit.
SymmetricSolution synthesize(const SymmetricInstance& inst, const Rat& epsilon,
                             uint64_t samples, uint64_t seed,
                             const std::optional<Matroid>& demand_limit = {});

}  // namespace tarifflab
