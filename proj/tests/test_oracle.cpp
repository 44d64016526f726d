#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "common/testgen.hpp"
#include "tarifflab/oracle.hpp"

using namespace tarifflab;

namespace {

ValueDist uniform123() {
    return ValueDist({{Rat(1), make_rat(1, 3)}, {Rat(2), make_rat(1, 3)}, {Rat(3), make_rat(1, 3)}});
}

// Full audit of a returned menu: IR, IC, polytope and ex ante feasibility,
// and the objective recomputed from the menu itself.
void audit_menu(const OptBicResult& res, const Matroid& F,
                const std::optional<ExAnteConstraint>& c, LpObjective obj) {
    size_t T = res.types.size();
    size_t m = res.types.front().values.size();
    std::vector<Rat> util(T);
    for (size_t t = 0; t < T; ++t) {
        Rat w = 0;
        for (size_t j = 0; j < m; ++j) w += res.types[t].values[j] * res.menu[t].alloc[j];
        util[t] = w - res.menu[t].payment;
        CHECK(util[t] >= 0);  // IR
        for (ItemSet s = 1; s <= full_set(static_cast<int>(m)); ++s) {
            Rat mass = 0;
            for (size_t j = 0; j < m; ++j)
                if (s & (1u << j)) mass += res.menu[t].alloc[j];
            CHECK(mass <= F.rank(s));
            if (s == full_set(static_cast<int>(m))) break;
        }
    }
    for (size_t t = 0; t < T; ++t)
        for (size_t s = 0; s < T; ++s) {
            if (t == s) continue;
            Rat other = -res.menu[s].payment;
            for (size_t j = 0; j < m; ++j)
                other += res.types[t].values[j] * res.menu[s].alloc[j];
            CHECK(util[t] >= other);  // IC
        }
    if (c) {
        for (size_t j = 0; j < m; ++j) {
            Rat sold = 0;
            for (size_t t = 0; t < T; ++t) sold += res.types[t].prob * res.menu[t].alloc[j];
            CHECK(sold <= c->q[j]);
        }
    }
    Rat value = 0;
    for (size_t t = 0; t < T; ++t) {
        if (obj == LpObjective::revenue) {
            value += res.types[t].prob * res.menu[t].payment;
        } else {
            for (size_t j = 0; j < m; ++j)
                value += res.types[t].prob * res.types[t].values[j] * res.menu[t].alloc[j];
        }
    }
    CHECK(value == res.value);
}

}  // namespace

TEST_CASE("single item optimum equals the Myerson price") {
    ProductDist D({uniform123()});
    Matroid F = Matroid::uniform(1, 1);
    OptBicResult r = opt_bic(D, F, std::nullopt, LpObjective::revenue);
    CHECK(r.value == make_rat(4, 3));
    CHECK(r.value == single_item_opt_rev(D.item(0), Rat(1)));
    audit_menu(r, F, std::nullopt, LpObjective::revenue);
}

TEST_CASE("capped single item optimum irons across atoms") {
    // cap 1/2 sits inside the envelope segment between the 2/3 and 1/3 tails
    ProductDist D({uniform123()});
    Matroid F = Matroid::uniform(1, 1);
    ExAnteConstraint c = make_ex_ante(D, {make_rat(1, 2)});
    OptBicResult r = opt_bic(D, F, c, LpObjective::revenue);
    CHECK(r.value == make_rat(7, 6));
    audit_menu(r, F, c, LpObjective::revenue);
}

TEST_CASE("welfare objective reproduces the expected max basis value") {
    RngStream s(2718);
    for (int trial = 0; trial < 25; ++trial) {
        RngStream t = s.substream(trial);
        int m = testgen::gen_int(t, 1, 2);
        ProductDist D = testgen::gen_product(t, m, 3, 9);
        Matroid F = testgen::gen_matroid(t, m);
        OptBicResult r = opt_bic(D, F, std::nullopt, LpObjective::welfare);
        Rat expected = 0;
        for (const auto& type : enumerate_profiles(D, 1000))
            expected += type.prob * set_value(BuyerType{type.values, F}, full_set(m));
        CHECK(r.value == expected);
        audit_menu(r, F, std::nullopt, LpObjective::welfare);
    }
}

TEST_CASE("zero cap sells nothing") {
    ProductDist D({uniform123(), uniform123()});
    Matroid F = Matroid::uniform(2, 1);
    ExAnteConstraint c = make_ex_ante(D, {Rat(0), Rat(0)});
    CHECK(opt_bic(D, F, c, LpObjective::revenue).value == 0);
    CHECK(opt_bic(D, F, c, LpObjective::welfare).value == 0);
}

TEST_CASE("optimum is monotone in the cap and concave along halvings") {
    RngStream s(515);
    for (int trial = 0; trial < 20; ++trial) {
        RngStream t = s.substream(trial);
        int m = testgen::gen_int(t, 1, 2);
        ProductDist D = testgen::gen_product(t, m, 3, 9);
        Matroid F = testgen::gen_matroid(t, m);
        std::vector<Rat> q = testgen::gen_q(t, m);
        ExAnteConstraint c = make_ex_ante(D, q);
        Rat rev = opt_bic(D, F, c, LpObjective::revenue).value;

        std::vector<Rat> half = q;
        for (auto& x : half) x /= 2;
        Rat rev_half = opt_bic(D, F, make_ex_ante(D, half), LpObjective::revenue).value;
        CHECK(rev_half >= rev / 2);

        std::vector<Rat> larger = q;
        for (auto& x : larger) x = rat_min(Rat(1), x + make_rat(1, 8));
        Rat rev_larger = opt_bic(D, F, make_ex_ante(D, larger), LpObjective::revenue).value;
        CHECK(rev_larger >= rev);
    }
}

TEST_CASE("pricing families never beat the optimal mechanism") {
    RngStream s(616);
    for (int trial = 0; trial < 20; ++trial) {
        RngStream t = s.substream(trial);
        int m = testgen::gen_int(t, 1, 2);
        ProductDist D = testgen::gen_product(t, m, 3, 9);
        Matroid F = testgen::gen_matroid(t, m);
        Rat rev = opt_bic(D, F, std::nullopt, LpObjective::revenue).value;
        CHECK(grid_pricing_opt(D, F, PricingFamily::item).revenue <= rev);
        CHECK(grid_pricing_opt(D, F, PricingFamily::bundle).revenue <= rev);
        Rat trev = grid_pricing_opt(D, F, PricingFamily::tariff).revenue;
        CHECK(trev <= rev);
        // a tariff generalizes both one-part pricings
        CHECK(trev >= grid_pricing_opt(D, F, PricingFamily::item).revenue);
        CHECK(trev >= grid_pricing_opt(D, F, PricingFamily::bundle).revenue);
    }
}

TEST_CASE("bundle pricing on two unit-demand items") {
    ProductDist D({uniform123(), uniform123()});
    Matroid F = Matroid::uniform(2, 1);
    PricingOpt b = grid_pricing_opt(D, F, PricingFamily::bundle);
    CHECK(b.revenue == make_rat(16, 9));
    CHECK(b.entry_fee == 2);
}

TEST_CASE("item pricing decomposes for additive buyers") {
    ProductDist D({uniform123(), ValueDist({{Rat(2), make_rat(1, 2)}, {Rat(5), make_rat(1, 2)}})});
    Matroid F = Matroid::uniform(2, 2);
    PricingOpt srev = grid_pricing_opt(D, F, PricingFamily::item);
    CHECK(srev.revenue ==
          single_item_opt_rev(D.item(0), Rat(1)) + single_item_opt_rev(D.item(1), Rat(1)));
}

TEST_CASE("an unsellable floor forces zero revenue") {
    ProductDist D({uniform123()});
    Matroid F = Matroid::uniform(1, 1);
    std::vector<Rat> floor{Rat(4)};
    CHECK(grid_pricing_opt(D, F, PricingFamily::item, floor).revenue == 0);
    CHECK(grid_pricing_opt(D, F, PricingFamily::tariff, floor).revenue == 0);
}

TEST_CASE("posted price revenue under both tie rules") {
    ProductDist D({uniform123()});
    Matroid F = Matroid::uniform(1, 1);
    CHECK(posted_price_revenue(D, F, {Rat(2)}, TieRule::accept) == make_rat(4, 3));
    CHECK(posted_price_revenue(D, F, {Rat(2)}, TieRule::decline) == make_rat(2, 3));
}

TEST_CASE("exact tariff revenue matches the direct formula") {
    ProductDist D({uniform123(), uniform123()});
    Matroid F = Matroid::uniform(2, 1);
    TwoPartTariff t{Rat(1), {Rat(1), Rat(1)}, std::nullopt};
    Rat direct = 0;
    for (const auto& type : enumerate_profiles(D, 100)) {
        DemandOutcome out = run_single(t, BuyerType{type.values, F}, 0b11);
        direct += type.prob * out.payment;
    }
    CHECK(exact_tariff_revenue(t, D, F) == direct);
}

TEST_CASE("grid maximization of the ex ante objective") {
    ProductDist D({uniform123()});
    Matroid F = Matroid::uniform(1, 1);
    BqOpt bq = brute_force_bq(D, F, make_rat(1, 3), make_rat(1, 2));
    CHECK(bq.value == 1);
    CHECK(bq.q == std::vector<Rat>{make_rat(1, 3)});
    CHECK(brute_force_bq(D, F, make_rat(1, 3), Rat(0)).value == 0);

    // additive separability when the grid contains the per-item optima
    ProductDist D2({uniform123(), uniform123()});
    Matroid F2 = Matroid::uniform(2, 2);
    BqOpt bq2 = brute_force_bq(D2, F2, make_rat(1, 3), Rat(1));
    CHECK(bq2.value == single_item_opt_rev(D2.item(0), Rat(1)) +
                           single_item_opt_rev(D2.item(1), Rat(1)));
}

TEST_CASE("bundle value distribution") {
    ProductDist D({uniform123(), uniform123()});
    ValueDist bd = bundle_value_dist(D, Matroid::uniform(2, 1));
    // max of two iid uniform {1,2,3}
    CHECK(bd == ValueDist({{Rat(1), make_rat(1, 9)},
                           {Rat(2), make_rat(3, 9)},
                           {Rat(3), make_rat(5, 9)}}));
}

TEST_CASE("scale guards") {
    std::vector<ValueDist> many(5, uniform123());
    ProductDist D(many);
    CHECK_THROWS_AS(opt_bic(D, Matroid::uniform(5, 2), std::nullopt, LpObjective::revenue),
                    scale_error);
}
