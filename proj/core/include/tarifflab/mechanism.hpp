#pragma once

#include <optional>
#include <vector>

#include "tarifflab/dist.hpp"
#include "tarifflab/matroid.hpp"
#include "tarifflab/valuation.hpp"

namespace tarifflab {

// Entry fee plus per-item prices; item pricing has zero fee, bundle pricing
// has zero item prices. An optional demand limit restricts the buyer to a
// submatroid of its own constraint.
struct TwoPartTariff {
    Rat entry_fee;
    std::vector<Rat> prices;
    std::optional<Matroid> demand_limit;
};

// Per-item sale probability caps with the derived ex ante prices.
struct ExAnteConstraint {
    std::vector<Rat> q;
    std::vector<Rat> beta;
};

ExAnteConstraint make_ex_ante(const ProductDist& D, std::vector<Rat> q);

// A tariff satisfies an ex ante constraint when every price clears the
// corresponding ex ante price.
bool satisfies_ex_ante(const TwoPartTariff& t, const ExAnteConstraint& c);

// Buyer response to a single tariff over the available items. Tariffs whose
// item prices are all zero are bundle pricings: participation there is at
// weak preference (value >= fee); everything else declines at indifference.
DemandOutcome run_single(const TwoPartTariff& t, const BuyerType& b, ItemSet available);

// Fixed agent order, per-agent entry fees, prices and optional demand limits.
struct SequentialTariff {
    std::vector<int> order;                       // permutation of agents
    std::vector<Rat> fees;                        // indexed by agent
    std::vector<std::vector<Rat>> prices;         // [agent][item]
    std::vector<std::optional<Matroid>> limits;   // per agent

    int num_agents() const { return static_cast<int>(fees.size()); }
    int num_items() const { return fees.empty() ? 0 : static_cast<int>(prices.front().size()); }
};

// Composes per-agent tariffs into a sequential mechanism: entry fees are
// halved, prices and demand limits carried over. Requires every tariff to
// satisfy its ex ante constraint and the caps to sum to at most 1/2 per item.
SequentialTariff stitch(const std::vector<TwoPartTariff>& tariffs,
                        const std::vector<ExAnteConstraint>& constraints,
                        std::vector<int> order);

struct ExactSequentialResult {
    Rat revenue;
    std::vector<Rat> agent_payment;              // expected payment per agent
    std::vector<Rat> participation;              // participation probability per agent
    std::vector<std::vector<Rat>> availability;  // [agent][item] P(available at turn)
    // Interim participation per agent, indexed like enumerate_profiles of the
    // agent's own distribution.
    std::vector<std::vector<char>> joins;
};

// Exact expected revenue by forward propagation of the availability
// distribution. Interim participation is computed exactly: an agent
// participates when its expected surplus over predecessors' behavior exceeds
// the entry fee (weak preference for pure bundle tariffs).
ExactSequentialResult run_sequential_exact(const SequentialTariff& mech,
                                           const std::vector<ProductDist>& dists,
                                           const std::vector<Matroid>& feas,
                                           unsigned long long profile_cap = 1000000);

struct McSequentialResult {
    double mean = 0;
    double std_error = 0;
    std::vector<double> agent_payment;
    std::vector<std::vector<double>> availability;
    uint64_t trials = 0;
    // Filled when requested: one revenue and one payment row per trial.
    std::vector<double> trial_revenue;
    std::vector<std::vector<double>> trial_agent_payment;
};

// Monte Carlo counterpart. Interim participation uses an empirical
// availability distribution built from `inner_budget` simulations of the
// preceding agents, memoized per agent type.
McSequentialResult run_sequential_mc(const SequentialTariff& mech,
                                     const std::vector<ProductDist>& dists,
                                     const std::vector<Matroid>& feas, uint64_t trials,
                                     uint64_t seed, uint64_t inner_budget = 2000,
                                     bool keep_trials = false);

struct RevenueEstimate {
    double mean = 0;
    double std_error = 0;
    uint64_t trials = 0;
};

RevenueEstimate estimate_revenue(const TwoPartTariff& t, const ProductDist& D,
                                 const Matroid& feas, uint64_t trials, uint64_t seed);
RevenueEstimate estimate_revenue(const SequentialTariff& mech,
                                 const std::vector<ProductDist>& dists,
                                 const std::vector<Matroid>& feas, uint64_t trials,
                                 uint64_t seed, uint64_t inner_budget = 2000);

}  // namespace tarifflab
