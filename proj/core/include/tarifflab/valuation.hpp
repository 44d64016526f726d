#pragma once

#include <optional>
#include <vector>

#include "tarifflab/matroid.hpp"
#include "tarifflab/rational.hpp"

namespace tarifflab {

// Realized buyer: per-item values plus the demand constraint.
struct BuyerType {
    std::vector<Rat> values;
    Matroid feas;
};

// How indifference is resolved. Executed mechanisms use `decline`: a buyer
// with surplus exactly zero walks away and never buys a zero-surplus item.
// Pricing benchmarks (SRev/BRev/TRev and revenue curves) use `accept`: the
// buyer participates at zero surplus and among surplus-equal bundles takes
// the one paying the most. Both are implementable tie-breakings, so either
// revenue is dominated by the optimal mechanism.
enum class TieRule { decline, accept };

// Constrained additive set value: max total value of an independent subset.
Rat set_value(const BuyerType& b, ItemSet s);

struct DemandOutcome {
    bool participates = false;
    ItemSet bundle = 0;
    Rat payment = 0;   // entry fee + item prices, 0 when declining
    Rat surplus = 0;   // value - payment when participating, else 0
};

// Utility-maximizing response to entry fee + per-item prices over the
// available items. `limit`, when present, must refine the buyer constraint
// (verified by enumeration on small ground sets) and replaces it.
DemandOutcome demand_response(const BuyerType& b, const Rat& entry_fee,
                              const std::vector<Rat>& prices, ItemSet available,
                              const std::optional<Matroid>& limit,
                              TieRule rule = TieRule::decline);

// Best attainable item surplus (ignoring any entry fee) and the bundle that
// attains it. Used for interim participation decisions.
struct BundleChoice {
    ItemSet bundle = 0;
    Rat surplus = 0;
    Rat item_payment = 0;
};
BundleChoice best_bundle(const BuyerType& b, const std::vector<Rat>& prices,
                         ItemSet available, const std::optional<Matroid>& limit,
                         TieRule rule = TieRule::decline);

}  // namespace tarifflab
