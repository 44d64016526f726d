#include "tarifflab/coretail.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace tarifflab {

namespace {

const double kLn2 = std::log(2.0);
constexpr double kFloatTol = 1e-9;

}  // namespace

TermValue exact_term(std::string name, Rat value, Provenance prov) {
    TermValue t;
    t.name = std::move(name);
    t.approx = rat_d(value);
    t.exact = std::move(value);
    t.prov = prov;
    return t;
}

TermValue float_term(std::string name, double value) {
    TermValue t;
    t.name = std::move(name);
    t.approx = value;
    t.prov = Provenance::float64;
    return t;
}

TermValue mc_term(std::string name, double value, double sigma) {
    TermValue t;
    t.name = std::move(name);
    t.approx = value;
    t.sigma = sigma;
    t.prov = Provenance::montecarlo;
    return t;
}

BoundCertificate finish_certificate(std::string name, TermValue lhs, TermValue rhs,
                                    std::vector<TermValue> terms, double tolerance) {
    BoundCertificate cert;
    cert.name = std::move(name);
    cert.tolerance = tolerance;
    if (lhs.exact && rhs.exact && tolerance == 0) {
        cert.holds = *lhs.exact <= *rhs.exact;
    } else {
        cert.holds = lhs.approx <= rhs.approx + tolerance + 3 * (lhs.sigma + rhs.sigma);
    }
    cert.lhs = std::move(lhs);
    cert.rhs = std::move(rhs);
    cert.terms = std::move(terms);
    return cert;
}

CoreTailSplit split(const ProductDist& D, const ExAnteConstraint& c, SplitVariant variant) {
    size_t m = D.num_items();
    if (c.q.size() != m) throw std::invalid_argument("split: constraint length mismatch");
    CoreTailSplit s;
    s.variant = variant;
    s.beta = c.beta;
    s.tau = 0;
    s.r = 0;
    s.thresholds.assign(m, Rat(0));

    if (variant == SplitVariant::section5) {
        // Candidate offsets are the atom distances above beta; the product CDF
        // is a step function of the offset, so the scan is exact.
        std::set<Rat> candidates{Rat(0)};
        for (size_t j = 0; j < m; ++j)
            for (const auto& a : D.item(j).atoms())
                if (a.value > s.beta[j]) candidates.insert(a.value - s.beta[j]);
        for (const Rat& t : candidates) {
            Rat all_core = 1;
            for (size_t j = 0; j < m; ++j) all_core *= D.item(j).cdf(s.beta[j] + t);
            if (all_core >= Rat(1, 2)) {
                s.tau = t;
                break;
            }
        }
        for (size_t j = 0; j < m; ++j) s.thresholds[j] = s.beta[j] + s.tau;
    } else {
        for (size_t j = 0; j < m; ++j) s.r += single_item_opt_rev(D.item(j), c.q[j]);
        for (size_t j = 0; j < m; ++j) s.thresholds[j] = rat_max(s.beta[j], s.r);
    }

    s.core_all_prob = 1;
    for (size_t j = 0; j < m; ++j) {
        Rat xi = D.item(j).tail_prob(s.thresholds[j]);
        s.tail_probs.push_back(xi);
        s.core_all_prob *= Rat(1) - xi;
        if (xi == 1) throw precondition_error("split: an item has an empty core");
        s.core.push_back(condition(D.item(j), s.thresholds[j], Side::core));
        if (xi > 0)
            s.tail.push_back(condition(D.item(j), s.thresholds[j], Side::tail));
        else
            s.tail.push_back(std::nullopt);
    }
    if (variant == SplitVariant::section5) {
        if (s.core_all_prob < Rat(1, 2))
            throw std::logic_error("split: core mass below 1/2 after threshold scan");
        Rat xi_sum = rat_sum(s.tail_probs);
        if (rat_d(xi_sum) > kLn2 + kFloatTol)
            throw std::logic_error("split: tail masses exceed ln 2");
    }
    return s;
}

namespace {

// Tail product distribution for the items of A (relabeled) and its restricted
// matroid; xi_A is the probability that exactly A is the tail set.
struct TailScenario {
    ItemSet a;
    Rat xi_a;
    ProductDist dist;
    Matroid feas;
};

std::vector<TailScenario> tail_scenarios(const CoreTailSplit& s, const Matroid& F) {
    size_t m = s.beta.size();
    std::vector<TailScenario> out;
    ItemSet all = full_set(static_cast<int>(m));
    for (ItemSet a = 1; a <= all; ++a) {
        Rat xi_a = 1;
        bool possible = true;
        std::vector<ValueDist> dists;
        for (size_t j = 0; j < m && possible; ++j) {
            if (a & (1u << j)) {
                if (!s.tail[j]) {
                    possible = false;
                    break;
                }
                xi_a *= s.tail_probs[j];
                dists.push_back(*s.tail[j]);
            } else {
                xi_a *= Rat(1) - s.tail_probs[j];
            }
        }
        if (possible && xi_a > 0)
            out.push_back({a, xi_a, ProductDist(std::move(dists)), restrict_and_relabel(F, a)});
        if (a == all) break;
    }
    return out;
}

Rat weighted_tail_revenue(const CoreTailSplit& s, const Matroid& F) {
    Rat total = 0;
    for (const auto& sc : tail_scenarios(s, F))
        total += sc.xi_a * opt_bic(sc.dist, sc.feas, std::nullopt, LpObjective::revenue).value;
    return total;
}

ProductDist core_product(const CoreTailSplit& s) { return ProductDist(s.core); }

ProductDist shifted_product(const ProductDist& D, const std::vector<Rat>& beta) {
    std::vector<ValueDist> items;
    items.reserve(D.num_items());
    for (size_t j = 0; j < D.num_items(); ++j) items.push_back(shift(D.item(j), beta[j]));
    return ProductDist(std::move(items));
}

// Lower median: smallest support point with CDF at least 1/2.
Rat lower_median(const ValueDist& d) {
    Rat acc = 0;
    for (const auto& a : d.atoms()) {
        acc += a.prob;
        if (acc >= Rat(1, 2)) return a.value;
    }
    return d.max_value();
}

}  // namespace

BoundCertificate core_decomposition_certificate(const ProductDist& D, const Matroid& F,
                                                const ExAnteConstraint& c) {
    CoreTailSplit s = split(D, c, SplitVariant::section5);
    Rat lhs = opt_bic(D, F, c, LpObjective::revenue).value;
    Rat core_val = opt_bic(core_product(s), F, c, LpObjective::welfare).value;
    Rat tail_rev = weighted_tail_revenue(s, F);
    return finish_certificate(
        "core_decomposition", exact_term("ex_ante_rev", lhs, Provenance::lp),
        exact_term("core_val_plus_tail_rev", core_val + tail_rev, Provenance::lp),
        {exact_term("core_welfare", core_val, Provenance::lp),
         exact_term("tail_revenue", tail_rev, Provenance::lp),
         exact_term("tau", s.tau), exact_term("core_all_prob", s.core_all_prob)},
        0.0);
}

BoundCertificate tail_revenue_certificate(const CoreTailSplit& s, const ProductDist& D,
                                          const Matroid& F) {
    size_t m = D.num_items();
    Rat lhs = weighted_tail_revenue(s, F);
    Rat srev_floor = grid_pricing_opt(D, F, PricingFamily::item, s.beta).revenue;
    double rhs = 8.0 * (1.0 + kLn2) * rat_d(srev_floor);

    // Chain quantities: the unit-demand relaxation and the per-item tail sums.
    Rat chain_ud = 0;
    for (const auto& sc : tail_scenarios(s, F)) {
        Matroid ud = Matroid::uniform(static_cast<int>(sc.dist.num_items()), 1);
        chain_ud += sc.xi_a * Rat(set_size(sc.a)) *
                    grid_pricing_opt(sc.dist, ud, PricingFamily::item).revenue;
    }
    Rat xi_sum = rat_sum(s.tail_probs);
    Rat chain_per_item = 0;
    for (size_t j = 0; j < m; ++j) {
        if (!s.tail[j]) continue;
        Rat tail_rev_j = single_item_opt_rev(*s.tail[j], Rat(1));
        chain_per_item += s.tail_probs[j] * tail_rev_j * (Rat(1) + xi_sum - s.tail_probs[j]);
    }

    TermValue lhs_t = exact_term("weighted_tail_revenue", lhs, Provenance::lp);
    TermValue rhs_t = float_term("8(1+ln2)_srev_floor", rhs);
    return finish_certificate(
        "tail_vs_floored_item_pricing", lhs_t, rhs_t,
        {exact_term("srev_floor", srev_floor),
         exact_term("unit_demand_chain", chain_ud, Provenance::lp),
         exact_term("per_item_tail_chain", chain_per_item),
         exact_term("xi_sum", xi_sum)},
        kFloatTol);
}

std::vector<BoundCertificate> core_bound_certificates(const CoreTailSplit& s,
                                                      const ProductDist& D, const Matroid& F,
                                                      const ExAnteConstraint& c) {
    std::vector<BoundCertificate> out;
    ProductDist core = core_product(s);
    ProductDist core_shifted = shifted_product(core, s.beta);
    ProductDist d_shifted = shifted_product(D, s.beta);

    Rat core_val_q = opt_bic(core, F, c, LpObjective::welfare).value;
    ValueDist core_bundle = bundle_value_dist(core_shifted, F);
    Rat val_core_shifted = core_bundle.expectation();
    Rat beta_dot_q = rat_dot(s.beta, c.q);

    out.push_back(finish_certificate(
        "core_value_split", exact_term("core_val_ex_ante", core_val_q, Provenance::lp),
        exact_term("beta_q_plus_shifted_val", beta_dot_q + val_core_shifted, Provenance::lp),
        {exact_term("beta_dot_q", beta_dot_q),
         exact_term("shifted_core_val", val_core_shifted)},
        0.0));

    Rat median = lower_median(core_bundle);
    if (s.tau == 0) {
        out.push_back(finish_certificate(
            "bundle_concentration", exact_term("shifted_core_val", val_core_shifted),
            exact_term("3_median", Rat(3) * median),
            {exact_term("median", median), exact_term("tau", s.tau)}, 0.0));
    } else {
        double rhs = 3.0 * rat_d(median) + 4.0 * rat_d(s.tau) / kLn2;
        out.push_back(finish_certificate(
            "bundle_concentration", exact_term("shifted_core_val", val_core_shifted),
            float_term("3_median_plus_4tau_ln2", rhs),
            {exact_term("median", median), exact_term("tau", s.tau)}, kFloatTol));
    }

    Rat brev_shifted = grid_pricing_opt(d_shifted, F, PricingFamily::bundle).revenue;
    Rat srev_floor = grid_pricing_opt(D, F, PricingFamily::item, s.beta).revenue;
    double rhs = 6.0 * rat_d(brev_shifted) + (8.0 / kLn2) * rat_d(srev_floor);
    out.push_back(finish_certificate(
        "shifted_core_recovery", exact_term("shifted_core_val", val_core_shifted),
        float_term("6_brev_plus_8ln2_srev", rhs),
        {exact_term("brev_shifted", brev_shifted), exact_term("srev_floor", srev_floor)},
        kFloatTol));
    return out;
}

BoundCertificate single_agent_tariff_certificate(const ProductDist& D, const Matroid& F,
                                                 const ExAnteConstraint& c) {
    CoreTailSplit s = split(D, c, SplitVariant::section5);
    Rat lhs = opt_bic(D, F, c, LpObjective::revenue).value;
    Rat brev_shifted =
        grid_pricing_opt(shifted_product(D, s.beta), F, PricingFamily::bundle).revenue;
    Rat srev_floor = grid_pricing_opt(D, F, PricingFamily::item, s.beta).revenue;
    Rat beta_dot_q = rat_dot(s.beta, c.q);
    double rhs = 6.0 * rat_d(brev_shifted) + 8.0 * (1.0 + kLn2 + 1.0 / kLn2) * rat_d(srev_floor) +
                 rat_d(beta_dot_q);
    return finish_certificate(
        "single_agent_tariff_bound", exact_term("ex_ante_rev", lhs, Provenance::lp),
        float_term("6_brev+8(1+ln2+1/ln2)_srev+beta_q", rhs),
        {exact_term("brev_shifted", brev_shifted), exact_term("srev_floor", srev_floor),
         exact_term("beta_dot_q", beta_dot_q), exact_term("tau", s.tau)},
        kFloatTol);
}

BoundCertificate constant_factor_certificate(const ProductDist& D, const Matroid& F) {
    Rat lhs = opt_bic(D, F, std::nullopt, LpObjective::revenue).value;
    Rat srev = grid_pricing_opt(D, F, PricingFamily::item).revenue;
    Rat brev = grid_pricing_opt(D, F, PricingFamily::bundle).revenue;
    Rat best = rat_max(srev, brev);
    Rat rhs = Rat(311, 10) * best;
    double ratio = best > 0 ? rat_d(lhs) / rat_d(best) : 0.0;
    return finish_certificate(
        "rev_vs_simple_pricing_31_1", exact_term("opt_rev", lhs, Provenance::lp),
        exact_term("31.1_max_srev_brev", rhs),
        {exact_term("srev", srev), exact_term("brev", brev), float_term("ratio", ratio)}, 0.0);
}

std::vector<BoundCertificate> ex_ante_factor_certificates(
    const ProductDist& D, const Matroid& F, const ExAnteConstraint& c,
    const std::optional<Matroid>& demand_limit) {
    std::optional<Matroid> limit = demand_limit;
    if (!limit) {
        if (F.kind() == Matroid::Kind::explicit_table)
            throw precondition_error(
                "ex_ante_factor: general matroids need an explicit demand-limit submatroid");
        limit = F;  // partition and uniform constraints limit to themselves
    }
    Rat lhs = opt_bic(D, F, c, LpObjective::revenue).value;
    Rat trev = grid_pricing_opt(D, *limit, PricingFamily::tariff, c.beta).revenue;
    std::vector<BoundCertificate> out;
    out.push_back(finish_certificate(
        "ex_ante_rev_vs_tariff_35_1", exact_term("ex_ante_rev", lhs, Provenance::lp),
        exact_term("35.1_trev_floor", Rat(351, 10) * trev),
        {exact_term("trev_floor", trev)}, 0.0));
    if (in_scaled_polytope(F, c.q, Rat(1, 2))) {
        out.push_back(finish_certificate(
            "ex_ante_rev_vs_tariff_33_1", exact_term("ex_ante_rev", lhs, Provenance::lp),
            exact_term("33.1_trev_floor", Rat(331, 10) * trev),
            {exact_term("trev_floor", trev)}, 0.0));
    }
    return out;
}

BoundCertificate prophet_certificate(const ProductDist& D, const Matroid& F,
                                     const ExAnteConstraint& c) {
    if (F.kind() == Matroid::Kind::explicit_table)
        throw precondition_error("prophet bound: partition or uniform constraint required");
    if (!in_scaled_polytope(F, c.q, Rat(1, 2)))
        throw precondition_error("prophet bound: q must lie in (1/2) P_F");
    Rat lhs = rat_dot(c.beta, c.q);
    Rat posted = posted_price_revenue(D, F, c.beta, TieRule::accept);
    return finish_certificate(
        "prophet_ex_ante_pricing", exact_term("beta_dot_q", lhs),
        exact_term("2_posted_beta_revenue", Rat(2) * posted),
        {exact_term("posted_beta_revenue", posted)}, 0.0);
}

std::vector<BoundCertificate> additive_certificates(const ProductDist& D,
                                                    const ExAnteConstraint& c) {
    size_t m = D.num_items();
    Matroid F = Matroid::uniform(static_cast<int>(m), static_cast<int>(m));
    CoreTailSplit s = split(D, c, SplitVariant::appendixC);
    std::vector<BoundCertificate> out;

    std::vector<Rat> rj(m);
    for (size_t j = 0; j < m; ++j) rj[j] = single_item_opt_rev(D.item(j), c.q[j]);

    for (size_t j = 0; j < m; ++j) {
        std::string tag = "item" + std::to_string(j);
        // Core surplus variance: values below beta contribute zero surplus.
        ValueDist surplus = clamp_nonneg(shift(s.core[j], s.beta[j]));
        out.push_back(finish_certificate(
            "core_surplus_variance_" + tag, exact_term("variance", surplus.variance()),
            exact_term("2_r_rj", Rat(2) * s.r * rj[j]),
            {exact_term("r", s.r), exact_term("r_j", rj[j]),
             exact_term("threshold", s.thresholds[j])},
            0.0));
        if (s.tail_probs[j] > 0) {
            Rat tail_rev = single_item_opt_rev(*s.tail[j], Rat(1));
            out.push_back(finish_certificate(
                "tail_rev_cap_" + tag, exact_term("tail_rev", tail_rev),
                exact_term("rj_over_xi", rj[j] / s.tail_probs[j]),
                {exact_term("xi_j", s.tail_probs[j])}, 0.0));
            out.push_back(finish_certificate(
                "tail_prob_cap_" + tag, exact_term("xi_j", s.tail_probs[j]),
                exact_term("rj_over_r", s.r > 0 ? rj[j] / s.r : Rat(1)),
                {exact_term("r", s.r)}, 0.0));
        }
    }

    // Intermediate recoveries under the appendix-C split.
    ProductDist core_shifted = shifted_product(core_product(s), s.beta);
    Rat val_core = bundle_value_dist(core_shifted, F).expectation();
    Rat brev_core = grid_pricing_opt(core_shifted, F, PricingFamily::bundle).revenue;
    out.push_back(finish_certificate(
        "additive_core_recovery", exact_term("shifted_core_val", val_core),
        exact_term("4_max_brev_r", Rat(4) * rat_max(brev_core, s.r)),
        {exact_term("brev_core_shifted", brev_core), exact_term("r", s.r)}, 0.0));
    Rat tail_rev = weighted_tail_revenue(s, F);
    out.push_back(finish_certificate(
        "additive_tail_recovery", exact_term("weighted_tail_revenue", tail_rev, Provenance::lp),
        exact_term("2_r", Rat(2) * s.r), {exact_term("r", s.r)}, 0.0));

    Rat lhs = opt_bic(D, F, c, LpObjective::revenue).value;
    Rat trev = grid_pricing_opt(D, F, PricingFamily::tariff, s.beta).revenue;
    out.push_back(finish_certificate(
        "additive_factor_7", exact_term("ex_ante_rev", lhs, Provenance::lp),
        exact_term("7_trev_floor", Rat(7) * trev), {exact_term("trev_floor", trev)}, 0.0));
    return out;
}

BoundCertificate unit_demand_reduction_certificate(const ProductDist& D, const Matroid& F) {
    size_t m = D.num_items();
    Rat lhs = opt_bic(D, F, std::nullopt, LpObjective::revenue).value;
    Matroid ud = Matroid::uniform(static_cast<int>(m), 1);
    Rat srev_ud = grid_pricing_opt(D, ud, PricingFamily::item).revenue;
    return finish_certificate(
        "unit_demand_reduction", exact_term("opt_rev", lhs, Provenance::lp),
        exact_term("4m_srev_unit_demand", Rat(4) * Rat(static_cast<long>(m)) * srev_ud),
        {exact_term("srev_unit_demand", srev_ud)}, 0.0);
}

}  // namespace tarifflab
