// Acceptance suite: each numbered criterion prints one [PASS]/[FAIL] line.
// Everything is driven by fixed seeds, so a green run is reproducible.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "common/testgen.hpp"
#include "tarifflab/coretail.hpp"
#include "tarifflab/io.hpp"
#include "tarifflab/oracle.hpp"
#include "tarifflab/symmetric.hpp"

using namespace tarifflab;
using tarifflab::testgen::gen_int;

namespace {

int failures = 0;

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

void report(const std::string& id, bool pass, const std::string& detail, double secs) {
    printf("[%s] %-28s %s (%.1fs)\n", pass ? "PASS" : "FAIL", id.c_str(), detail.c_str(), secs);
    fflush(stdout);
    if (!pass) failures++;
}

// m <= 3 instances with small supports; three-atom items only at low m so
// the incentive LPs stay quick.
ProductDist gen_sized_product(RngStream& t, int m) {
    int atoms = m >= 3 ? (gen_int(t, 0, 9) == 0 ? 3 : 2) : 3;
    return testgen::gen_product(t, m, atoms, 10);
}

double ln2() { return std::log(2.0); }

void criterion_1() {
    Timer timer;
    RngStream root(101);
    int violations = 0;
    double max_ratio = 0;
    const int total = 200;
    for (int i = 0; i < total; ++i) {
        RngStream t = root.substream(i);
        int m = 1 + (i % 3);
        ProductDist D = gen_sized_product(t, m);
        Matroid F = testgen::gen_matroid(t, m, 3);  // uniform or partition
        BoundCertificate cert = constant_factor_certificate(D, F);
        if (!cert.holds) violations++;
        for (const auto& term : cert.terms)
            if (term.name == "ratio") max_ratio = std::max(max_ratio, term.approx);
    }
    char detail[128];
    snprintf(detail, sizeof(detail), "instances=%d violations=%d max_ratio=%.3f", total,
             violations, max_ratio);
    report("01-factor-31.1", violations == 0 && timer.seconds() <= 300, detail, timer.seconds());
}

void criterion_2() {
    Timer timer;
    RngStream root(202);
    int violations = 0;
    const int total = 100;
    for (int i = 0; i < total; ++i) {
        RngStream t = root.substream(i);
        int m = 1 + (i % 3);
        ProductDist D = gen_sized_product(t, m);
        Matroid F = testgen::gen_matroid(t, m);
        ExAnteConstraint c = make_ex_ante(D, testgen::gen_q(t, m));
        if (!single_agent_tariff_certificate(D, F, c).holds) violations++;
    }
    char detail[64];
    snprintf(detail, sizeof(detail), "instances=%d violations=%d", total, violations);
    report("02-ex-ante-tariff-bound", violations == 0 && timer.seconds() <= 600, detail,
           timer.seconds());
}

void criterion_3() {
    Timer timer;
    RngStream root(303);
    int violations = 0;
    const int total = 50;
    for (int i = 0; i < total; ++i) {
        RngStream t = root.substream(i);
        int m = 1 + (i % 2);
        ProductDist D = testgen::gen_product(t, m, 3, 10);
        Matroid F = testgen::gen_matroid(t, m);
        ExAnteConstraint c = make_ex_ante(D, testgen::gen_q(t, m));
        if (!core_decomposition_certificate(D, F, c).holds) violations++;
    }
    char detail[64];
    snprintf(detail, sizeof(detail), "instances=%d violations=%d", total, violations);
    report("03-core-decomposition", violations == 0, detail, timer.seconds());
}

void criterion_4() {
    Timer timer;
    RngStream root(404);
    int violations = 0;
    const int total = 100;
    for (int i = 0; i < total; ++i) {
        RngStream t = root.substream(i);
        int m = gen_int(t, 1, 4);
        ProductDist D = testgen::gen_product(t, m, 3, 12);
        Matroid F = testgen::gen_matroid(t, m, 3);
        std::vector<Rat> q =
            testgen::scale_into_polytope(F, testgen::gen_q(t, m), make_rat(1, 2));
        ExAnteConstraint c = make_ex_ante(D, q);
        if (!prophet_certificate(D, F, c).holds) violations++;
    }
    char detail[64];
    snprintf(detail, sizeof(detail), "instances=%d violations=%d", total, violations);
    report("04-prophet-pricing", violations == 0, detail, timer.seconds());
}

struct StitchOutcome {
    bool half_bound = true;
    bool availability = true;
    bool mc_agrees = true;
};

StitchOutcome stitch_instance(RngStream& t, int idx) {
    int n = gen_int(t, 2, 3);
    int m = gen_int(t, 1, 2);
    std::vector<ProductDist> dists;
    std::vector<Matroid> feas;
    std::vector<TwoPartTariff> tariffs;
    std::vector<ExAnteConstraint> cons;
    Rat standalone_sum = 0;
    for (int i = 0; i < n; ++i) {
        dists.push_back(testgen::gen_product(t, m, 3, 10));
        feas.push_back(testgen::gen_matroid(t, m, 3));
        std::vector<Rat> q = testgen::scale_into_polytope(feas[i], testgen::gen_q(t, m),
                                                          make_rat(1, 2));
        for (auto& x : q) x /= n;
        cons.push_back(make_ex_ante(dists[i], q));
        // ex ante prices with a surplus-median entry fee
        std::map<Rat, Rat> surplus;
        for (const auto& type : enumerate_profiles(dists[i], kJointProfileCap))
            surplus[best_bundle(BuyerType{type.values, feas[i]}, cons[i].beta,
                                full_set(m), std::nullopt)
                        .surplus] += type.prob;
        Rat fee = 0, acc = 0;
        for (const auto& [v, mass] : surplus) {
            acc += mass;
            if (acc >= make_rat(1, 2)) {
                fee = rat_max(Rat(0), v);
                break;
            }
        }
        tariffs.push_back({fee, cons[i].beta, std::nullopt});
        standalone_sum += exact_tariff_revenue(tariffs.back(), dists[i], feas[i]);
    }
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    SequentialTariff mech = stitch(tariffs, cons, order);
    ExactSequentialResult exact = run_sequential_exact(mech, dists, feas);

    StitchOutcome out;
    out.half_bound = exact.revenue >= standalone_sum / 2;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j)
            if (exact.availability[i][j] < make_rat(1, 2)) out.availability = false;
    McSequentialResult mc =
        run_sequential_mc(mech, dists, feas, 4000, 9000 + idx, 4000);
    out.mc_agrees = std::abs(mc.mean - rat_d(exact.revenue)) <= 3 * mc.std_error + 1e-9;
    return out;
}

void criteria_5_and_6() {
    Timer timer;
    RngStream root(505);
    int half_viol = 0, avail_viol = 0, mc_viol = 0;
    const int total = 20;
    for (int i = 0; i < total; ++i) {
        RngStream t = root.substream(i);
        StitchOutcome out = stitch_instance(t, i);
        if (!out.half_bound) half_viol++;
        if (!out.availability) avail_viol++;
        if (!out.mc_agrees) mc_viol++;
    }
    char detail[96];
    snprintf(detail, sizeof(detail), "instances=%d half_viol=%d mc_viol=%d", total, half_viol,
             mc_viol);
    report("05-stitching-half-revenue", half_viol == 0 && mc_viol == 0, detail, timer.seconds());
    char detail6[64];
    snprintf(detail6, sizeof(detail6), "instances=%d violations=%d", total, avail_viol);
    report("06-availability-floor", avail_viol == 0, detail6, timer.seconds());
}

void criterion_7() {
    Timer timer;
    RngStream root(707);
    int counterexamples = 0;
    const int total = 10000;
    for (int i = 0; i < total; ++i) {
        RngStream t = root.substream(i);
        int m = gen_int(t, 2, 8);
        Matroid M = testgen::gen_matroid(t, m);
        std::vector<Rat> w(m);
        for (int j = 0; j < m; ++j) w[j] = Rat(gen_int(t, -3, 9));
        ItemSet inside = static_cast<ItemSet>(t.next_u64()) & full_set(m);
        ItemSet full_basis = max_weight_basis(M, w, full_set(m));
        ItemSet restricted = max_weight_basis(M, w, inside);
        if (full_basis & inside & ~restricted) counterexamples++;
    }
    char detail[64];
    snprintf(detail, sizeof(detail), "trials=%d counterexamples=%d", total, counterexamples);
    report("07-greedy-retention", counterexamples == 0, detail, timer.seconds());
}

void criterion_8() {
    Timer timer;
    RngStream root(808);
    int violations = 0;
    const int total = 50;
    for (int i = 0; i < total; ++i) {
        RngStream t = root.substream(i);
        Rat eps = (i % 2 == 0) ? make_rat(1, 8) : make_rat(1, 16);
        int n = (i % 2 == 0) ? gen_int(t, 1, 4) : gen_int(t, 1, 8);
        if (Rat(1, 2 * n) < eps) n = 1;
        int m = gen_int(t, 1, 3);
        SymmetricInstance inst{n, testgen::gen_product(t, m, 3, 10),
                               testgen::gen_matroid(t, m, 3)};
        BqSolution bq = solve_bq(inst, eps);
        Rat cap(1, 2 * n);
        bool ok = in_scaled_polytope(inst.feas, bq.expected_q, Rat(1));
        for (const auto& q : bq.expected_q)
            if (q > cap) ok = false;
        Rat max_sum = 0;
        for (int j = 0; j < m; ++j) max_sum += inst.dist.item(j).max_value();
        BqOpt brute = brute_force_bq(inst.dist, inst.feas, eps, cap);
        if (bq.objective < brute.value - eps * max_sum) ok = false;
        if (!ok) violations++;
    }
    char detail[64];
    snprintf(detail, sizeof(detail), "instances=%d violations=%d", total, violations);
    report("08-quantile-grid-solver", violations == 0, detail, timer.seconds());
}

void criterion_9() {
    Timer timer;
    RngStream root(909);
    int violations = 0;
    const int total = 100;
    for (int i = 0; i < total; ++i) {
        RngStream t = root.substream(i);
        int m = 1 + (i % 3);
        ProductDist D = gen_sized_product(t, m);
        ExAnteConstraint c = make_ex_ante(D, testgen::gen_q(t, m));
        for (const auto& cert : additive_certificates(D, c))
            if (!cert.holds) violations++;
    }
    char detail[64];
    snprintf(detail, sizeof(detail), "instances=%d violations=%d", total, violations);
    report("09-additive-suite", violations == 0, detail, timer.seconds());
}

void criterion_10() {
    Timer timer;
    RngStream root(1010);
    bool ok = true;
    // single-item optimum equals the enumeration oracle exactly
    for (int i = 0; i < 40; ++i) {
        RngStream t = root.substream(i);
        ProductDist D({testgen::gen_dist(t, 3, 10)});
        Matroid F = Matroid::uniform(1, 1);
        if (opt_bic(D, F, std::nullopt, LpObjective::revenue).value !=
            single_item_opt_rev(D.item(0), Rat(1)))
            ok = false;
    }
    // halving along 1-D cap slices, and pricing dominance
    for (int i = 0; i < 20; ++i) {
        RngStream t = root.substream(1000 + i);
        int m = gen_int(t, 1, 2);
        ProductDist D = testgen::gen_product(t, m, 3, 10);
        Matroid F = testgen::gen_matroid(t, m);
        std::vector<Rat> q = testgen::gen_q(t, m);
        Rat rev = opt_bic(D, F, make_ex_ante(D, q), LpObjective::revenue).value;
        std::vector<Rat> half = q;
        for (auto& x : half) x /= 2;
        Rat rev_half = opt_bic(D, F, make_ex_ante(D, half), LpObjective::revenue).value;
        if (!(rev_half >= rev / 2)) ok = false;
        Rat uncapped = opt_bic(D, F, std::nullopt, LpObjective::revenue).value;
        if (grid_pricing_opt(D, F, PricingFamily::item).revenue > uncapped) ok = false;
        if (grid_pricing_opt(D, F, PricingFamily::bundle).revenue > uncapped) ok = false;
        if (grid_pricing_opt(D, F, PricingFamily::tariff).revenue > uncapped) ok = false;
    }
    report("10-oracle-consistency", ok, "single-item equality, halving, pricing dominance",
           timer.seconds());
}

void criterion_11() {
    Timer timer;
    RngStream root(1111);
    int violations = 0;
    const int total = 100;
    for (int i = 0; i < total; ++i) {
        RngStream t = root.substream(i);
        int m = gen_int(t, 1, 3);
        ProductDist D = testgen::gen_product(t, m, 3, 10);
        Matroid F = testgen::gen_matroid(t, m);
        ExAnteConstraint c = make_ex_ante(D, testgen::gen_q(t, m));
        CoreTailSplit s = split(D, c, SplitVariant::section5);
        std::vector<ValueDist> shifted;
        for (int j = 0; j < m; ++j) shifted.push_back(shift(s.core[j], s.beta[j]));
        ValueDist bundle = bundle_value_dist(ProductDist(shifted), F);
        Rat mean = bundle.expectation();
        Rat acc = 0, median = bundle.max_value();
        for (const auto& a : bundle.atoms()) {
            acc += a.prob;
            if (acc >= make_rat(1, 2)) {
                median = a.value;
                break;
            }
        }
        double rhs = 3.0 * rat_d(median) + 4.0 * rat_d(s.tau) / ln2();
        if (rat_d(mean) > rhs + 1e-9) violations++;
    }
    char detail[64];
    snprintf(detail, sizeof(detail), "instances=%d violations=%d", total, violations);
    report("11-bundle-concentration", violations == 0, detail, timer.seconds());
}

void criterion_12() {
    Timer timer;
    const std::string cli = TARIFFLAB_CLI_PATH;
    const std::string data = TARIFFLAB_DATA_DIR;
    auto run = [&](const std::string& args) {
        std::string cmd = cli + " " + args + " >/dev/null 2>&1";
        return WEXITSTATUS(std::system(cmd.c_str()));
    };
    bool ok = true;
    std::string a = "/tmp/tarifflab_acc_a", b = "/tmp/tarifflab_acc_b";
    std::string certify = "certify --instance " + data +
                          "/instances/multi3.json --trials 1200 --seed 21 --out ";
    ok &= run(certify + a) == 0;
    ok &= run(certify + b) == 0;
    ok &= read_file(a) == read_file(b);

    std::string synth = "synthesize --instance " + data +
                        "/instances/symmetric_small.json --seed 5 --trials 300 --out ";
    ok &= run(synth + a + " --report " + a + ".rep") == 0;
    ok &= run(synth + b + " --report " + b + ".rep") == 0;
    ok &= read_file(a) == read_file(b);
    ok &= read_file(a + ".rep") == read_file(b + ".rep");

    std::string eval = "evaluate --mechanism " + a + " --instance " + data +
                       "/instances/symmetric_small.json --trials 500 --seed 8 --format csv --out ";
    ok &= run(eval + a + ".csv") == 0;
    ok &= run(eval + b + ".csv") == 0;
    ok &= read_file(a + ".csv") == read_file(b + ".csv");
    report("12-reproducibility", ok, "certify/synthesize/evaluate byte-stable", timer.seconds());
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criteria_5_and_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11();
    criterion_12();
    if (failures) {
        printf("%d criterion(s) failed\n", failures);
        return 1;
    }
    printf("all criteria passed\n");
    return 0;
}
