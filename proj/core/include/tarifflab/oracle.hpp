#pragma once

#include <optional>
#include <vector>

#include "tarifflab/dist.hpp"
#include "tarifflab/lp.hpp"
#include "tarifflab/matroid.hpp"
#include "tarifflab/mechanism.hpp"

namespace tarifflab {

// Default enumeration cap for one agent's type space (3^6).
constexpr unsigned long long kDefaultTypeCap = 729;
// Cap on joint profile spaces in exact multi-agent computations.
constexpr unsigned long long kJointProfileCap = 1000000;

enum class LpObjective { revenue, welfare };

struct MenuEntry {
    std::vector<Rat> alloc;  // interim allocation per item
    Rat payment;
};

struct OptBicResult {
    Rat value;
    std::vector<TypeProfile> types;
    std::vector<MenuEntry> menu;
};

// LP-optimal BIC demand-feasible single-agent mechanism, optionally under
// per-item ex ante caps. Exact rational arithmetic throughout; incentive and
// matroid-polytope rows are generated as they are violated, which keeps the
// working tableau near the size of the binding set.
OptBicResult opt_bic(const ProductDist& D, const Matroid& F,
                     const std::optional<ExAnteConstraint>& c, LpObjective objective,
                     unsigned long long type_cap = kDefaultTypeCap);

// Exact expected revenue of posting an item-price vector (no entry fee).
Rat posted_price_revenue(const ProductDist& D, const Matroid& F,
                         const std::vector<Rat>& prices, TieRule rule,
                         unsigned long long type_cap = kJointProfileCap);

// Exact expected revenue of a single-agent tariff by full enumeration.
Rat exact_tariff_revenue(const TwoPartTariff& t, const ProductDist& D, const Matroid& F,
                         unsigned long long type_cap = kJointProfileCap);

// Exact counterpart of estimate_revenue for sequential mechanisms.
Rat exact_mechanism_revenue(const SequentialTariff& mech,
                            const std::vector<ProductDist>& dists,
                            const std::vector<Matroid>& feas,
                            unsigned long long profile_cap = kJointProfileCap);

// Distribution of the buyer's grand-bundle value max_{S in F} v(S).
ValueDist bundle_value_dist(const ProductDist& D, const Matroid& F,
                            unsigned long long type_cap = kJointProfileCap);

enum class PricingFamily { item, bundle, tariff };

struct PricingOpt {
    Rat revenue;
    std::vector<Rat> prices;  // empty for bundle pricing
    Rat entry_fee;            // 0 for item pricing
};

// Exact optimum of a pricing family over the discrete candidate grids:
// item prices range over support points at or above the floor (plus the
// floor itself and one never-sell point); entry fees range over achievable
// surplus values. Buyers accept at indifference, the seller-favorable
// convention shared by all pricing benchmarks.
PricingOpt grid_pricing_opt(const ProductDist& D, const Matroid& F, PricingFamily family,
                            const std::optional<std::vector<Rat>>& floor = {},
                            unsigned long long work_cap = 4000000);

struct BqOpt {
    Rat value;
    std::vector<Rat> q;
};

// Exhaustive grid maximization of sum_j q_j * sale_price_j(q_j) over
// q in P_F intersected with [0, cap]^m.
BqOpt brute_force_bq(const ProductDist& D, const Matroid& F, const Rat& step, const Rat& cap,
                     unsigned long long grid_cap = 1000000);

}  // namespace tarifflab
