#include "tarifflab/valuation.hpp"

namespace tarifflab {

Rat set_value(const BuyerType& b, ItemSet s) {
    if (b.values.size() != static_cast<size_t>(b.feas.ground_size()))
        throw std::invalid_argument("buyer: value vector does not match ground size");
    ItemSet basis = max_weight_basis(b.feas, b.values, s);
    Rat total = 0;
    for (size_t j = 0; j < b.values.size(); ++j)
        if (basis & (1u << j)) total += b.values[j];
    return total;
}

namespace {

const Matroid& effective_constraint(const BuyerType& b, const std::optional<Matroid>& limit) {
    if (!limit) return b.feas;
    if (limit->ground_size() != b.feas.ground_size())
        throw precondition_error("demand limit: ground size mismatch");
    if (b.feas.ground_size() <= 10 && !limit->refines(b.feas))
        throw precondition_error("demand limit is not a subfamily of the buyer constraint");
    return *limit;
}

}  // namespace

BundleChoice best_bundle(const BuyerType& b, const std::vector<Rat>& prices,
                         ItemSet available, const std::optional<Matroid>& limit,
                         TieRule rule) {
    const Matroid& F = effective_constraint(b, limit);
    size_t m = b.values.size();
    if (prices.size() != m) throw std::invalid_argument("demand: price vector length mismatch");
    std::vector<Rat> surplus(m);
    for (size_t j = 0; j < m; ++j) surplus[j] = b.values[j] - prices[j];
    ItemSet bundle;
    if (rule == TieRule::decline) {
        bundle = max_weight_basis(F, surplus, available);
    } else {
        bundle = max_weight_basis_lex(F, surplus, prices, available);
    }
    BundleChoice out;
    out.bundle = bundle;
    for (size_t j = 0; j < m; ++j) {
        if (bundle & (1u << j)) {
            out.surplus += surplus[j];
            out.item_payment += prices[j];
        }
    }
    return out;
}

DemandOutcome demand_response(const BuyerType& b, const Rat& entry_fee,
                              const std::vector<Rat>& prices, ItemSet available,
                              const std::optional<Matroid>& limit, TieRule rule) {
    BundleChoice choice = best_bundle(b, prices, available, limit, rule);
    Rat net = choice.surplus - entry_fee;
    bool in = rule == TieRule::decline ? net > 0 : net >= 0;
    DemandOutcome out;
    if (!in) return out;
    out.participates = true;
    out.bundle = choice.bundle;
    out.payment = entry_fee + choice.item_payment;
    out.surplus = net;
    return out;
}

}  // namespace tarifflab
