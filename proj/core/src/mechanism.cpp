#include "tarifflab/mechanism.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace tarifflab {

ExAnteConstraint make_ex_ante(const ProductDist& D, std::vector<Rat> q) {
    if (q.size() != D.num_items()) throw std::invalid_argument("ex ante: length mismatch");
    ExAnteConstraint c;
    c.beta.reserve(q.size());
    for (size_t j = 0; j < q.size(); ++j) {
        if (q[j] < 0 || q[j] > 1) throw std::invalid_argument("ex ante: q outside [0,1]");
        c.beta.push_back(quantile_price(D.item(j), q[j]));
    }
    c.q = std::move(q);
    return c;
}

bool satisfies_ex_ante(const TwoPartTariff& t, const ExAnteConstraint& c) {
    if (t.prices.size() != c.beta.size()) throw std::invalid_argument("ex ante: length mismatch");
    for (size_t j = 0; j < c.beta.size(); ++j)
        if (t.prices[j] < c.beta[j]) return false;
    return true;
}

namespace {

bool all_zero(const std::vector<Rat>& xs) {
    for (const auto& x : xs)
        if (x != 0) return false;
    return true;
}

}  // namespace

DemandOutcome run_single(const TwoPartTariff& t, const BuyerType& b, ItemSet available) {
    // A pure bundle pricing sells at weak preference; the general tariff
    // declines at indifference.
    TieRule rule = all_zero(t.prices) ? TieRule::accept : TieRule::decline;
    return demand_response(b, t.entry_fee, t.prices, available, t.demand_limit, rule);
}

SequentialTariff stitch(const std::vector<TwoPartTariff>& tariffs,
                        const std::vector<ExAnteConstraint>& constraints,
                        std::vector<int> order) {
    size_t n = tariffs.size();
    if (constraints.size() != n || order.size() != n)
        throw std::invalid_argument("stitch: per-agent inputs must align");
    if (n == 0) throw std::invalid_argument("stitch: no agents");
    size_t m = tariffs.front().prices.size();
    std::vector<char> seen(n, 0);
    for (int i : order) {
        if (i < 0 || static_cast<size_t>(i) >= n || seen[i])
            throw std::invalid_argument("stitch: order is not a permutation");
        seen[i] = 1;
    }
    for (size_t i = 0; i < n; ++i) {
        if (tariffs[i].prices.size() != m) throw std::invalid_argument("stitch: item count mismatch");
        if (!satisfies_ex_ante(tariffs[i], constraints[i]))
            throw precondition_error("stitch: tariff does not satisfy its ex ante constraint");
    }
    for (size_t j = 0; j < m; ++j) {
        Rat total = 0;
        for (size_t i = 0; i < n; ++i) total += constraints[i].q[j];
        if (total > Rat(1, 2))
            throw precondition_error("stitch: per-item ex ante caps must sum to at most 1/2");
    }
    SequentialTariff mech;
    mech.order = std::move(order);
    mech.fees.reserve(n);
    mech.prices.reserve(n);
    mech.limits.reserve(n);
    for (size_t i = 0; i < n; ++i) {
        mech.fees.push_back(tariffs[i].entry_fee / 2);
        mech.prices.push_back(tariffs[i].prices);
        mech.limits.push_back(tariffs[i].demand_limit);
    }
    return mech;
}

namespace {

struct AvailAtom {
    ItemSet mask;
    Rat prob;
};

void validate_sequential(const SequentialTariff& mech, const std::vector<ProductDist>& dists,
                         const std::vector<Matroid>& feas) {
    size_t n = mech.fees.size();
    if (dists.size() != n || feas.size() != n || mech.prices.size() != n ||
        mech.limits.size() != n || mech.order.size() != n)
        throw std::invalid_argument("sequential run: per-agent inputs must align");
    for (size_t i = 0; i < n; ++i) {
        if (dists[i].num_items() != mech.prices[i].size() ||
            static_cast<size_t>(feas[i].ground_size()) != mech.prices[i].size())
            throw std::invalid_argument("sequential run: item count mismatch");
    }
}

}  // namespace

ExactSequentialResult run_sequential_exact(const SequentialTariff& mech,
                                           const std::vector<ProductDist>& dists,
                                           const std::vector<Matroid>& feas,
                                           unsigned long long profile_cap) {
    validate_sequential(mech, dists, feas);
    size_t n = mech.fees.size();
    size_t m = mech.prices.front().size();

    unsigned long long joint = 1;
    for (size_t i = 0; i < n; ++i) {
        unsigned long long cnt = dists[i].num_profiles();
        if (cnt > profile_cap / std::max(1ull, joint)) {
            joint = profile_cap + 1;
            break;
        }
        joint *= cnt;
    }
    if (joint > profile_cap) throw scale_error("exact sequential run: joint type space too large");

    ExactSequentialResult res;
    res.revenue = 0;
    res.agent_payment.assign(n, Rat(0));
    res.participation.assign(n, Rat(0));
    res.availability.assign(n, std::vector<Rat>(m, Rat(0)));
    res.joins.assign(n, {});

    std::vector<AvailAtom> avail = {{full_set(static_cast<int>(m)), Rat(1)}};
    for (int agent : mech.order) {
        const auto types = enumerate_profiles(dists[agent], profile_cap);
        bool bundle_tariff = all_zero(mech.prices[agent]);

        for (const auto& a : avail)
            for (size_t j = 0; j < m; ++j)
                if (a.mask & (1u << j)) res.availability[agent][j] += a.prob;

        // Interim utilities over the availability distribution; the decision
        // depends on the agent's own type only.
        std::vector<char>& joins = res.joins[agent];
        joins.assign(types.size(), 0);
        std::vector<std::vector<ItemSet>> chosen(types.size(),
                                                 std::vector<ItemSet>(avail.size(), 0));
        for (size_t t = 0; t < types.size(); ++t) {
            BuyerType buyer{types[t].values, feas[agent]};
            Rat expected = 0;
            for (size_t ai = 0; ai < avail.size(); ++ai) {
                BundleChoice pick = best_bundle(buyer, mech.prices[agent], avail[ai].mask,
                                                mech.limits[agent], TieRule::decline);
                chosen[t][ai] = pick.bundle;
                expected += avail[ai].prob * pick.surplus;
            }
            Rat net = expected - mech.fees[agent];
            joins[t] = bundle_tariff ? net >= 0 : net > 0;
            if (joins[t]) res.participation[agent] += types[t].prob;
        }

        // Revenue and the pushed-forward availability distribution.
        std::unordered_map<ItemSet, Rat> next;
        for (size_t ai = 0; ai < avail.size(); ++ai) {
            for (size_t t = 0; t < types.size(); ++t) {
                Rat mass = avail[ai].prob * types[t].prob;
                if (!joins[t]) {
                    next.try_emplace(avail[ai].mask, Rat(0)).first->second += mass;
                    continue;
                }
                ItemSet bundle = chosen[t][ai];
                Rat pay = mech.fees[agent];
                for (size_t j = 0; j < m; ++j)
                    if (bundle & (1u << j)) pay += mech.prices[agent][j];
                res.agent_payment[agent] += mass * pay;
                next.try_emplace(avail[ai].mask & ~bundle, Rat(0)).first->second += mass;
            }
        }
        avail.clear();
        avail.reserve(next.size());
        for (auto& [mask, prob] : next) avail.push_back({mask, prob});
        std::sort(avail.begin(), avail.end(),
                  [](const AvailAtom& x, const AvailAtom& y) { return x.mask < y.mask; });
    }
    for (size_t i = 0; i < n; ++i) res.revenue += res.agent_payment[i];
    return res;
}

namespace {

// Availability histogram an agent faces, from inner simulations of the
// preceding agents; decisions of those agents are memoized lazily.
struct AgentPolicy {
    std::vector<AvailAtom> avail_hist;  // empirical, rational weights 1/B
    std::unordered_map<uint64_t, bool> decisions;
};

uint64_t encode_profile(const std::vector<size_t>& idx) {
    uint64_t key = 0xcbf29ce484222325ull;
    for (size_t v : idx) {
        key ^= v + 0x9e3779b97f4a7c15ull;
        key *= 0x100000001b3ull;
    }
    return key;
}

struct McEngine {
    const SequentialTariff& mech;
    const std::vector<ProductDist>& dists;
    const std::vector<Matroid>& feas;
    std::vector<AgentPolicy> policies;         // indexed by order position
    std::vector<int> position_of_agent;

    McEngine(const SequentialTariff& mech_, const std::vector<ProductDist>& dists_,
             const std::vector<Matroid>& feas_)
        : mech(mech_), dists(dists_), feas(feas_) {
        policies.resize(mech.fees.size());
        position_of_agent.assign(mech.fees.size(), 0);
        for (size_t p = 0; p < mech.order.size(); ++p) position_of_agent[mech.order[p]] = static_cast<int>(p);
    }

    bool decide(size_t pos, const std::vector<size_t>& atom_idx,
                const std::vector<Rat>& values) {
        int agent = mech.order[pos];
        uint64_t key = encode_profile(atom_idx);
        auto it = policies[pos].decisions.find(key);
        if (it != policies[pos].decisions.end()) return it->second;
        BuyerType buyer{values, feas[agent]};
        Rat expected = 0;
        for (const auto& a : policies[pos].avail_hist) {
            BundleChoice pick =
                best_bundle(buyer, mech.prices[agent], a.mask, mech.limits[agent], TieRule::decline);
            expected += a.prob * pick.surplus;
        }
        Rat net = expected - mech.fees[agent];
        bool join = all_zero(mech.prices[agent]) ? net >= 0 : net > 0;
        policies[pos].decisions.emplace(key, join);
        return join;
    }

    // Simulates positions [0, upto) and returns the remaining availability.
    ItemSet simulate_prefix(size_t upto, RngStream& stream) {
        size_t m = mech.prices.front().size();
        ItemSet avail = full_set(static_cast<int>(m));
        for (size_t pos = 0; pos < upto; ++pos) {
            int agent = mech.order[pos];
            std::vector<size_t> idx(dists[agent].num_items());
            std::vector<Rat> values(dists[agent].num_items());
            for (size_t j = 0; j < idx.size(); ++j) {
                idx[j] = sample_index(dists[agent].item(j), stream);
                values[j] = dists[agent].item(j).atoms()[idx[j]].value;
            }
            if (!decide(pos, idx, values)) continue;
            BuyerType buyer{values, feas[agent]};
            BundleChoice pick =
                best_bundle(buyer, mech.prices[agent], avail, mech.limits[agent], TieRule::decline);
            avail &= ~pick.bundle;
        }
        return avail;
    }

    void build_policies(RngStream base, uint64_t inner_budget) {
        for (size_t pos = 0; pos < mech.order.size(); ++pos) {
            RngStream s = base.substream(pos);
            std::unordered_map<ItemSet, uint64_t> hist;
            for (uint64_t b = 0; b < inner_budget; ++b) {
                RngStream inner = s.substream(b);
                hist[simulate_prefix(pos, inner)]++;
            }
            auto& out = policies[pos].avail_hist;
            for (auto& [mask, cnt] : hist)
                out.push_back({mask, Rat(static_cast<long>(cnt), static_cast<long>(inner_budget))});
            std::sort(out.begin(), out.end(),
                      [](const AvailAtom& x, const AvailAtom& y) { return x.mask < y.mask; });
        }
    }
};

}  // namespace

McSequentialResult run_sequential_mc(const SequentialTariff& mech,
                                     const std::vector<ProductDist>& dists,
                                     const std::vector<Matroid>& feas, uint64_t trials,
                                     uint64_t seed, uint64_t inner_budget, bool keep_trials) {
    validate_sequential(mech, dists, feas);
    if (trials == 0) throw std::invalid_argument("monte carlo run: trials must be positive");
    if (inner_budget == 0) throw std::invalid_argument("monte carlo run: inner budget must be positive");
    size_t n = mech.fees.size();
    size_t m = mech.prices.front().size();

    McEngine engine(mech, dists, feas);
    RngStream root(seed);
    engine.build_policies(root.substream("policy"), inner_budget);

    McSequentialResult res;
    res.trials = trials;
    res.agent_payment.assign(n, 0.0);
    res.availability.assign(n, std::vector<double>(m, 0.0));
    double sum = 0, sum_sq = 0;

    RngStream trial_base = root.substream("trial");
    if (keep_trials) {
        res.trial_revenue.reserve(trials);
        res.trial_agent_payment.reserve(trials);
    }
    for (uint64_t t = 0; t < trials; ++t) {
        RngStream s = trial_base.substream(t);
        ItemSet avail = full_set(static_cast<int>(m));
        double revenue = 0;
        std::vector<double> pays(keep_trials ? n : 0, 0.0);
        for (size_t pos = 0; pos < n; ++pos) {
            int agent = mech.order[pos];
            for (size_t j = 0; j < m; ++j)
                if (avail & (1u << j)) res.availability[agent][j] += 1.0;
            std::vector<size_t> idx(dists[agent].num_items());
            std::vector<Rat> values(dists[agent].num_items());
            for (size_t j = 0; j < idx.size(); ++j) {
                idx[j] = sample_index(dists[agent].item(j), s);
                values[j] = dists[agent].item(j).atoms()[idx[j]].value;
            }
            if (!engine.decide(pos, idx, values)) continue;
            BuyerType buyer{values, feas[agent]};
            BundleChoice pick =
                best_bundle(buyer, mech.prices[agent], avail, mech.limits[agent], TieRule::decline);
            double pay = rat_d(mech.fees[agent]) + rat_d(pick.item_payment);
            res.agent_payment[agent] += pay;
            if (keep_trials) pays[agent] = pay;
            revenue += pay;
            avail &= ~pick.bundle;
        }
        sum += revenue;
        sum_sq += revenue * revenue;
        if (keep_trials) {
            res.trial_revenue.push_back(revenue);
            res.trial_agent_payment.push_back(std::move(pays));
        }
    }
    res.mean = sum / static_cast<double>(trials);
    if (trials > 1) {
        double var = (sum_sq - sum * sum / static_cast<double>(trials)) /
                     static_cast<double>(trials - 1);
        res.std_error = std::sqrt(std::max(0.0, var) / static_cast<double>(trials));
    }
    for (auto& p : res.agent_payment) p /= static_cast<double>(trials);
    for (auto& row : res.availability)
        for (auto& x : row) x /= static_cast<double>(trials);
    return res;
}

RevenueEstimate estimate_revenue(const TwoPartTariff& t, const ProductDist& D,
                                 const Matroid& feas, uint64_t trials, uint64_t seed) {
    if (trials == 0) throw std::invalid_argument("estimate_revenue: trials must be positive");
    RngStream base = RngStream(seed).substream("trial");
    double sum = 0, sum_sq = 0;
    for (uint64_t k = 0; k < trials; ++k) {
        RngStream s = base.substream(k);
        std::vector<Rat> values = D.sample_profile(s);
        DemandOutcome out = run_single(t, BuyerType{values, feas}, full_set(static_cast<int>(D.num_items())));
        double pay = rat_d(out.payment);
        sum += pay;
        sum_sq += pay * pay;
    }
    RevenueEstimate est;
    est.trials = trials;
    est.mean = sum / static_cast<double>(trials);
    if (trials > 1) {
        double var = (sum_sq - sum * sum / static_cast<double>(trials)) /
                     static_cast<double>(trials - 1);
        est.std_error = std::sqrt(std::max(0.0, var) / static_cast<double>(trials));
    }
    return est;
}

RevenueEstimate estimate_revenue(const SequentialTariff& mech,
                                 const std::vector<ProductDist>& dists,
                                 const std::vector<Matroid>& feas, uint64_t trials,
                                 uint64_t seed, uint64_t inner_budget) {
    McSequentialResult res = run_sequential_mc(mech, dists, feas, trials, seed, inner_budget);
    return RevenueEstimate{res.mean, res.std_error, res.trials};
}

}  // namespace tarifflab
