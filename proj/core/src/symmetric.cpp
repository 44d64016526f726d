#include "tarifflab/symmetric.hpp"

#include <algorithm>
#include <map>

#include "tarifflab/oracle.hpp"

namespace tarifflab {

BqSolution solve_bq(const SymmetricInstance& inst, const Rat& epsilon) {
    if (inst.n < 1) throw std::invalid_argument("solve_bq: need at least one agent");
    Rat cap(1, 2 * inst.n);
    if (epsilon <= 0 || epsilon > cap)
        throw std::invalid_argument("solve_bq: need 0 < eps <= 1/(2n)");
    Rat inv = 1 / epsilon;
    if (inv.get_den() != 1) throw std::invalid_argument("solve_bq: 1/eps must be an integer");
    int k = static_cast<int>(inv.get_num().get_si());
    size_t m = inst.dist.num_items();

    // Per-item restricted grids and their ironed envelopes.
    std::vector<IronedCurve> curves;
    std::vector<UnionElement> elements;
    std::vector<long> cells(m, 0);
    for (size_t j = 0; j < m; ++j) {
        Rat zmax = cap / epsilon;
        long Z = static_cast<long>(mpz_class(zmax.get_num() / zmax.get_den()).get_si());
        cells[j] = Z;
        std::vector<Rat> grid;
        for (long z = 0; z <= Z; ++z) grid.push_back(Rat(z) * epsilon);
        curves.push_back(iron_on_grid(inst.dist.item(j), std::move(grid)));
        for (long z = 0; z < Z; ++z)
            elements.push_back({static_cast<int>(j), curves[j].slopes[z]});
    }

    UnionSelection sel = greedy_union_basis(inst.feas, k, elements);

    BqSolution out;
    out.expected_q.assign(m, Rat(0));
    out.objective = sel.total_weight * epsilon;

    // Locate each selected quantile on its envelope; mid-interval landings
    // are realized by mixing the surrounding hull vertices.
    struct Mix {
        Rat lo, hi, lambda;  // lambda on lo
        bool mixed;
    };
    std::vector<Mix> mixes(m);
    for (size_t j = 0; j < m; ++j) {
        long g = sel.counts[j];
        const auto& cv = curves[j];
        Rat mu = cv.grid[g];
        out.expected_q[j] = mu;
        if (cv.envelope[g] == cv.revenue[g]) {
            mixes[j] = {mu, mu, Rat(1), false};
            continue;
        }
        long lo = g, hi = g;
        while (lo > 0 && cv.envelope[lo] != cv.revenue[lo]) --lo;
        while (hi < static_cast<long>(cv.grid.size()) - 1 && cv.envelope[hi] != cv.revenue[hi]) ++hi;
        Rat lambda = (cv.grid[hi] - mu) / (cv.grid[hi] - cv.grid[lo]);
        mixes[j] = {cv.grid[lo], cv.grid[hi], lambda, true};
    }

    // Couple the per-item mixes on one shared uniform draw.
    std::vector<Rat> breaks{Rat(1)};
    for (const auto& mx : mixes)
        if (mx.mixed) breaks.push_back(mx.lambda);
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    Rat lo_edge = 0;
    for (const Rat& edge : breaks) {
        if (edge == lo_edge) continue;
        QMixtureComponent comp;
        comp.weight = edge - lo_edge;
        comp.q.resize(m);
        for (size_t j = 0; j < m; ++j) {
            if (!mixes[j].mixed) comp.q[j] = mixes[j].lo;
            else comp.q[j] = (mixes[j].lambda >= edge) ? mixes[j].lo : mixes[j].hi;
        }
        out.components.push_back(std::move(comp));
        lo_edge = edge;
    }
    return out;
}

BundleBranch bundle_branch(const SymmetricInstance& inst, uint64_t samples, uint64_t seed) {
    if (samples < 1) throw std::invalid_argument("bundle_branch: need at least one sample");
    size_t m = inst.dist.num_items();
    Rat cap(1, 2 * inst.n);
    BundleBranch out;
    out.samples = samples;
    out.prices.reserve(m);
    for (size_t j = 0; j < m; ++j) out.prices.push_back(quantile_price(inst.dist.item(j), cap));

    RngStream stream = RngStream(seed).substream("bundle");
    std::map<Rat, uint64_t> support;  // shifted bundle value -> count
    for (uint64_t s = 0; s < samples; ++s) {
        RngStream draw = stream.substream(s);
        std::vector<Rat> values = inst.dist.sample_profile(draw);
        for (size_t j = 0; j < m; ++j) values[j] -= out.prices[j];
        support[set_value(BuyerType{values, inst.feas}, full_set(static_cast<int>(m)))]++;
    }
    Rat best_rev = 0;
    Rat best_fee = 0;
    uint64_t best_cnt = 0;
    uint64_t tail = 0;
    for (auto it = support.rbegin(); it != support.rend(); ++it) {
        tail += it->second;
        if (it->first <= 0) break;
        Rat rev = it->first * Rat(static_cast<long>(tail));
        if (rev > best_rev) {  // descending fees: ties keep the larger fee
            best_rev = rev;
            best_fee = it->first;
            best_cnt = tail;
        }
    }
    out.fee = best_fee;
    out.accept_estimate = static_cast<double>(best_cnt) / static_cast<double>(samples);
    out.revenue_estimate = rat_d(best_fee) * out.accept_estimate;
    return out;
}

namespace {

size_t pick_component(const BqSolution& bq, RngStream& stream) {
    if (bq.components.size() == 1) return 0;
    uint64_t r = stream.next_u64();
    mpz_class rz;
    mpz_import(rz.get_mpz_t(), 1, 1, sizeof(r), 0, 0, &r);
    mpz_class two64 = mpz_class(1) << 64;
    Rat cum = 0;
    for (size_t i = 0; i < bq.components.size(); ++i) {
        cum += bq.components[i].weight;
        if (rz * cum.get_den() < cum.get_num() * two64) return i;
    }
    return bq.components.size() - 1;
}

}  // namespace

SymmetricSolution synthesize(const SymmetricInstance& inst, const Rat& epsilon,
                             uint64_t samples, uint64_t seed,
                             const std::optional<Matroid>& demand_limit) {
    if (inst.feas.kind() == Matroid::Kind::explicit_table && !demand_limit)
        throw precondition_error(
            "synthesize: general matroid constraints need a demand-limit submatroid");
    size_t m = inst.dist.num_items();
    size_t n = static_cast<size_t>(inst.n);
    Rat cap(1, 2 * inst.n);
    RngStream root(seed);

    SymmetricSolution sol;
    sol.bq = solve_bq(inst, epsilon);
    sol.item_objective = sol.bq.objective;
    BundleBranch bb = bundle_branch(inst, samples, seed);
    sol.bundle_estimate = bb.revenue_estimate;

    // Bundle branch: one shared fee, prices at the 1/(2n) quantile.
    TwoPartTariff bundle_tariff{bb.fee, bb.prices, demand_limit};
    std::vector<TwoPartTariff> bundle_tariffs(n, bundle_tariff);
    std::vector<ExAnteConstraint> bundle_cons(
        n, make_ex_ante(inst.dist, std::vector<Rat>(m, cap)));

    // Item branch: zero fee at the solver's ex ante prices.
    RngStream comp_stream = root.substream("component");
    sol.chosen_component = pick_component(sol.bq, comp_stream);
    sol.q = sol.bq.components[sol.chosen_component].q;
    std::vector<Rat> item_prices(m);
    for (size_t j = 0; j < m; ++j) item_prices[j] = quantile_price(inst.dist.item(j), sol.q[j]);
    TwoPartTariff item_tariff{Rat(0), item_prices, demand_limit};
    std::vector<TwoPartTariff> item_tariffs(n, item_tariff);
    std::vector<ExAnteConstraint> item_cons(n, make_ex_ante(inst.dist, sol.q));

    std::vector<int> order(n);
    for (size_t i = 0; i < n; ++i) order[i] = static_cast<int>(i);
    SequentialTariff bundle_mech = stitch(bundle_tariffs, bundle_cons, order);
    SequentialTariff item_mech = stitch(item_tariffs, item_cons, order);

    std::vector<ProductDist> dists(n, inst.dist);
    std::vector<Matroid> feas(n, inst.feas);
    bool bundle_better;
    try {
        ExactSequentialResult rb = run_sequential_exact(bundle_mech, dists, feas, 200000);
        ExactSequentialResult ri = run_sequential_exact(item_mech, dists, feas, 200000);
        sol.exact_eval = true;
        bundle_better = rb.revenue >= ri.revenue;
        sol.exact_revenue = bundle_better ? rb.revenue : ri.revenue;
        sol.est_revenue = rat_d(sol.exact_revenue);
        sol.est_sigma = 0;
    } catch (const scale_error&) {
        uint64_t trials = std::max<uint64_t>(samples, 1000);
        RevenueEstimate rb = estimate_revenue(bundle_mech, dists, feas, trials,
                                              root.substream("eval-bundle").key());
        RevenueEstimate ri = estimate_revenue(item_mech, dists, feas, trials,
                                              root.substream("eval-item").key());
        bundle_better = rb.mean >= ri.mean;
        sol.est_revenue = bundle_better ? rb.mean : ri.mean;
        sol.est_sigma = bundle_better ? rb.std_error : ri.std_error;
    }
    sol.chosen_branch = bundle_better ? 0 : 1;
    if (bundle_better) {
        sol.fee = bb.fee;
        sol.prices = bb.prices;
        sol.q.assign(m, cap);
        sol.mechanism = std::move(bundle_mech);
    } else {
        sol.fee = 0;
        sol.prices = item_prices;
        sol.mechanism = std::move(item_mech);
    }
    return sol;
}

}  // namespace tarifflab
