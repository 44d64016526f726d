#include "tarifflab/oracle.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace tarifflab {

namespace {

struct LpRow {
    std::vector<std::pair<size_t, Rat>> coeffs;  // sparse (col, coeff)
    Rat rhs;
};

}  // namespace

OptBicResult opt_bic(const ProductDist& D, const Matroid& F,
                     const std::optional<ExAnteConstraint>& c, LpObjective objective,
                     unsigned long long type_cap) {
    size_t m = D.num_items();
    if (static_cast<size_t>(F.ground_size()) != m)
        throw std::invalid_argument("opt_bic: matroid ground size mismatch");
    if (m > 4) throw scale_error("opt_bic: polytope row enumeration capped at 4 items");
    if (c && c->q.size() != m) throw std::invalid_argument("opt_bic: ex ante length mismatch");

    std::vector<TypeProfile> types = enumerate_profiles(D, type_cap);
    size_t T = types.size();
    size_t ncols = T * (m + 1);
    auto xcol = [m](size_t t, size_t j) { return t * m + j; };
    auto ucol = [m, T](size_t t) { return T * m + t; };

    std::vector<Rat> cost(ncols, Rat(0));
    for (size_t t = 0; t < T; ++t) {
        for (size_t j = 0; j < m; ++j) cost[xcol(t, j)] = types[t].prob * types[t].values[j];
        if (objective == LpObjective::revenue) cost[ucol(t)] = -types[t].prob;
    }

    std::vector<LpRow> rows;
    // Per-type singleton caps keep the LP bounded from the start.
    for (size_t t = 0; t < T; ++t)
        for (size_t j = 0; j < m; ++j)
            rows.push_back({{{xcol(t, j), Rat(1)}}, Rat(F.rank(1u << j))});
    if (c) {
        for (size_t j = 0; j < m; ++j) {
            LpRow row;
            for (size_t t = 0; t < T; ++t) row.coeffs.push_back({xcol(t, j), types[t].prob});
            row.rhs = c->q[j];
            rows.push_back(std::move(row));
        }
    }

    std::set<std::pair<size_t, size_t>> ic_added;     // (t, s)
    std::set<std::pair<size_t, ItemSet>> poly_added;  // (t, S)

    LpResult sol;
    while (true) {
        std::vector<std::vector<Rat>> A(rows.size(), std::vector<Rat>(ncols, Rat(0)));
        std::vector<Rat> b(rows.size());
        for (size_t i = 0; i < rows.size(); ++i) {
            for (const auto& [col, coeff] : rows[i].coeffs) A[i][col] = coeff;
            b[i] = rows[i].rhs;
        }
        sol = solve_lp_max(cost, A, b);
        if (sol.status != LpStatus::optimal)
            throw std::logic_error("opt_bic: relaxation unbounded");

        size_t added = 0;
        // Matroid polytope rows, most violated subset per type.
        ItemSet all = F.ground_mask();
        for (size_t t = 0; t < T; ++t) {
            for (ItemSet s = 1; s <= all; ++s) {
                if (set_size(s) >= 2 && !poly_added.count({t, s})) {
                    Rat lhs = 0;
                    for (size_t j = 0; j < m; ++j)
                        if (s & (1u << j)) lhs += sol.x[xcol(t, j)];
                    if (lhs > F.rank(s)) {
                        LpRow row;
                        for (size_t j = 0; j < m; ++j)
                            if (s & (1u << j)) row.coeffs.push_back({xcol(t, j), Rat(1)});
                        row.rhs = F.rank(s);
                        rows.push_back(std::move(row));
                        poly_added.insert({t, s});
                        ++added;
                    }
                }
                if (s == all) break;
            }
        }
        // Incentive rows: u_t >= u_s + (v_t - v_s) . x_s.
        for (size_t t = 0; t < T; ++t) {
            for (size_t s = 0; s < T; ++s) {
                if (s == t || ic_added.count({t, s})) continue;
                Rat rhs_val = sol.x[ucol(s)];
                for (size_t j = 0; j < m; ++j)
                    rhs_val += (types[t].values[j] - types[s].values[j]) * sol.x[xcol(s, j)];
                if (sol.x[ucol(t)] < rhs_val) {
                    LpRow row;
                    row.coeffs.push_back({ucol(t), Rat(-1)});
                    row.coeffs.push_back({ucol(s), Rat(1)});
                    for (size_t j = 0; j < m; ++j) {
                        Rat d = types[t].values[j] - types[s].values[j];
                        if (d != 0) row.coeffs.push_back({xcol(s, j), d});
                    }
                    row.rhs = 0;
                    rows.push_back(std::move(row));
                    ic_added.insert({t, s});
                    ++added;
                }
            }
        }
        if (added == 0) break;
    }

    OptBicResult res;
    res.value = sol.objective;
    res.types = std::move(types);
    res.menu.reserve(T);
    for (size_t t = 0; t < T; ++t) {
        MenuEntry e;
        e.alloc.reserve(m);
        Rat welfare = 0;
        for (size_t j = 0; j < m; ++j) {
            e.alloc.push_back(sol.x[xcol(t, j)]);
            welfare += res.types[t].values[j] * sol.x[xcol(t, j)];
        }
        e.payment = welfare - sol.x[ucol(t)];
        res.menu.push_back(std::move(e));
    }
    return res;
}

Rat posted_price_revenue(const ProductDist& D, const Matroid& F,
                         const std::vector<Rat>& prices, TieRule rule,
                         unsigned long long type_cap) {
    Rat total = 0;
    for (const auto& t : enumerate_profiles(D, type_cap)) {
        DemandOutcome out =
            demand_response(BuyerType{t.values, F}, Rat(0), prices,
                            full_set(F.ground_size()), std::nullopt, rule);
        total += t.prob * out.payment;
    }
    return total;
}

Rat exact_tariff_revenue(const TwoPartTariff& t, const ProductDist& D, const Matroid& F,
                         unsigned long long type_cap) {
    Rat total = 0;
    for (const auto& type : enumerate_profiles(D, type_cap)) {
        DemandOutcome out = run_single(t, BuyerType{type.values, F}, full_set(F.ground_size()));
        total += type.prob * out.payment;
    }
    return total;
}

Rat exact_mechanism_revenue(const SequentialTariff& mech,
                            const std::vector<ProductDist>& dists,
                            const std::vector<Matroid>& feas,
                            unsigned long long profile_cap) {
    return run_sequential_exact(mech, dists, feas, profile_cap).revenue;
}

ValueDist bundle_value_dist(const ProductDist& D, const Matroid& F,
                            unsigned long long type_cap) {
    std::map<Rat, Rat> mass;
    for (const auto& t : enumerate_profiles(D, type_cap))
        mass[set_value(BuyerType{t.values, F}, full_set(F.ground_size()))] += t.prob;
    std::vector<Atom> atoms;
    atoms.reserve(mass.size());
    for (const auto& [v, p] : mass) atoms.push_back({v, p});
    return ValueDist(std::move(atoms));
}

namespace {

std::vector<std::vector<Rat>> price_grids(const ProductDist& D,
                                          const std::optional<std::vector<Rat>>& floor) {
    size_t m = D.num_items();
    if (floor && floor->size() != m) throw std::invalid_argument("pricing: floor length mismatch");
    std::vector<std::vector<Rat>> grids(m);
    for (size_t j = 0; j < m; ++j) {
        std::set<Rat> g;
        Rat lo = floor ? (*floor)[j] : D.item(j).min_value();
        for (const auto& a : D.item(j).atoms())
            if (a.value >= lo) g.insert(a.value);
        g.insert(lo);
        g.insert(D.item(j).max_value() + 1);  // never sells
        grids[j].assign(g.begin(), g.end());
    }
    return grids;
}

}  // namespace

PricingOpt grid_pricing_opt(const ProductDist& D, const Matroid& F, PricingFamily family,
                            const std::optional<std::vector<Rat>>& floor,
                            unsigned long long work_cap) {
    size_t m = D.num_items();
    if (static_cast<size_t>(F.ground_size()) != m)
        throw std::invalid_argument("pricing: matroid ground size mismatch");
    std::vector<TypeProfile> types = enumerate_profiles(D, work_cap);

    if (family == PricingFamily::bundle) {
        // Optimal fee sits on the support of achievable bundle values.
        std::map<Rat, Rat> mass;
        for (const auto& t : types)
            mass[set_value(BuyerType{t.values, F}, full_set(static_cast<int>(m)))] += t.prob;
        PricingOpt best{Rat(0), {}, Rat(0)};
        Rat tail = 0;  // P(bundle value >= fee), built from the top
        for (auto it = mass.rbegin(); it != mass.rend(); ++it) {
            tail += it->second;
            Rat rev = it->first * tail;
            if (rev > best.revenue) {
                best.revenue = rev;
                best.entry_fee = it->first;
            }
        }
        return best;
    }

    std::vector<std::vector<Rat>> grids = price_grids(D, floor);
    unsigned long long combos = 1;
    for (const auto& g : grids) {
        combos *= g.size();
        if (combos * types.size() > work_cap) throw scale_error("pricing: grid too large");
    }

    PricingOpt best{Rat(-1), {}, Rat(0)};
    std::vector<size_t> pick(m, 0);
    std::vector<Rat> prices(m);
    while (true) {
        for (size_t j = 0; j < m; ++j) prices[j] = grids[j][pick[j]];
        if (family == PricingFamily::item) {
            Rat rev = 0;
            for (const auto& t : types) {
                BundleChoice ch = best_bundle(BuyerType{t.values, F}, prices,
                                              full_set(static_cast<int>(m)), std::nullopt,
                                              TieRule::accept);
                rev += t.prob * ch.item_payment;
            }
            if (rev > best.revenue) best = {rev, prices, Rat(0)};
        } else {
            // Two-part tariff: participation threshold sweeps the surplus support.
            std::map<Rat, std::pair<Rat, Rat>> by_surplus;  // surplus -> (mass, mass*itempay)
            for (const auto& t : types) {
                BundleChoice ch = best_bundle(BuyerType{t.values, F}, prices,
                                              full_set(static_cast<int>(m)), std::nullopt,
                                              TieRule::accept);
                auto& acc = by_surplus[ch.surplus];
                acc.first += t.prob;
                acc.second += t.prob * ch.item_payment;
            }
            Rat mass_tail = 0, pay_tail = 0;
            for (auto it = by_surplus.rbegin(); it != by_surplus.rend(); ++it) {
                if (it->first < 0) break;
                mass_tail += it->second.first;
                pay_tail += it->second.second;
                Rat fee = it->first;
                Rat rev = fee * mass_tail + pay_tail;
                if (rev > best.revenue || (rev == best.revenue && best.prices.empty())) {
                    best = {rev, prices, fee};
                }
            }
            // fee 0 with everyone of nonnegative surplus participating
            Rat rev0 = pay_tail;
            if (rev0 > best.revenue) best = {rev0, prices, Rat(0)};
        }
        size_t j = 0;
        while (j < m && ++pick[j] == grids[j].size()) pick[j++] = 0;
        if (j == m) break;
    }
    if (best.revenue < 0) best.revenue = 0;
    return best;
}

BqOpt brute_force_bq(const ProductDist& D, const Matroid& F, const Rat& step, const Rat& cap,
                     unsigned long long grid_cap) {
    size_t m = D.num_items();
    if (step <= 0 || cap < 0 || cap > 1) throw std::invalid_argument("brute_force_bq: bad grid");
    std::vector<std::vector<Rat>> grids(m);
    unsigned long long combos = 1;
    for (size_t j = 0; j < m; ++j) {
        for (Rat q = 0; q <= cap; q += step) grids[j].push_back(q);
        if (grids[j].back() < cap) grids[j].push_back(cap);
        combos *= grids[j].size();
        if (combos > grid_cap) throw scale_error("brute_force_bq: grid too large");
    }
    // Per-item revenue curve values, precomputed.
    std::vector<std::vector<Rat>> curve(m);
    for (size_t j = 0; j < m; ++j) {
        curve[j].reserve(grids[j].size());
        for (const auto& q : grids[j]) curve[j].push_back(revenue_curve(D.item(j), q));
    }
    BqOpt best{Rat(-1), std::vector<Rat>(m, Rat(0))};
    std::vector<size_t> pick(m, 0);
    std::vector<Rat> q(m);
    while (true) {
        Rat val = 0;
        for (size_t j = 0; j < m; ++j) {
            q[j] = grids[j][pick[j]];
            val += curve[j][pick[j]];
        }
        if (val > best.value && in_scaled_polytope(F, q, Rat(1))) best = {val, q};
        size_t j = 0;
        while (j < m && ++pick[j] == grids[j].size()) pick[j++] = 0;
        if (j == m) break;
    }
    return best;
}

}  // namespace tarifflab
