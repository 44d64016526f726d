// tarifflab: certify revenue bounds, synthesize symmetric-agent mechanisms,
// and evaluate tariff mechanisms on problem instances.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>

#include "tarifflab/coretail.hpp"
#include "tarifflab/io.hpp"
#include "tarifflab/oracle.hpp"
#include "tarifflab/symmetric.hpp"

using namespace tarifflab;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitCertFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitScale = 3;

std::string fmt_double(double x) {
    char buf[64];
    snprintf(buf, sizeof(buf), "%.17g", x);
    return std::string(buf);
}

void emit(const std::string& out_path, const std::string& content) {
    if (out_path.empty()) {
        std::cout << content;
        if (!content.empty() && content.back() != '\n') std::cout << '\n';
    } else {
        write_file(out_path, content);
    }
}

BoundCertificate scale_rhs(BoundCertificate cert, const Rat& scale) {
    if (scale == 1) return cert;
    TermValue rhs = cert.rhs;
    if (rhs.exact) {
        *rhs.exact *= scale;
        rhs.approx = rat_d(*rhs.exact);
    } else {
        rhs.approx *= rat_d(scale);
    }
    return finish_certificate(cert.name, cert.lhs, rhs, cert.terms, cert.tolerance);
}

// Canonical per-agent tariff for the stitching suite: ex ante prices with the
// lower median of the buyer's surplus as the entry fee.
TwoPartTariff canonical_tariff(const ProductDist& D, const Matroid& F,
                               const ExAnteConstraint& c) {
    std::map<Rat, Rat> surplus_mass;
    for (const auto& t : enumerate_profiles(D, kJointProfileCap)) {
        BundleChoice pick = best_bundle(BuyerType{t.values, F}, c.beta,
                                        full_set(F.ground_size()), std::nullopt);
        surplus_mass[pick.surplus] += t.prob;
    }
    Rat fee = 0;
    Rat acc = 0;
    for (const auto& [value, mass] : surplus_mass) {
        acc += mass;
        if (acc >= Rat(1, 2)) {
            fee = rat_max(Rat(0), value);
            break;
        }
    }
    return TwoPartTariff{fee, c.beta, std::nullopt};
}

struct CertifyArgs {
    std::string instance;
    std::string out;
    std::string format = "json";
    uint64_t seed = 0;
    bool seed_set = false;
    uint64_t trials = 0;
    double tolerance = 1e-9;
    std::string rhs_scale = "1";
};

void append_single_agent_suite(const Instance& inst, std::vector<BoundCertificate>& certs) {
    const ProductDist& D = inst.dists[0];
    const Matroid& F = inst.feas[0];
    std::vector<Rat> q =
        inst.ex_ante ? (*inst.ex_ante)[0] : std::vector<Rat>(inst.m, Rat(1));
    ExAnteConstraint c = make_ex_ante(D, q);

    certs.push_back(constant_factor_certificate(D, F));
    certs.push_back(unit_demand_reduction_certificate(D, F));
    certs.push_back(single_agent_tariff_certificate(D, F, c));
    CoreTailSplit s = split(D, c, SplitVariant::section5);
    certs.push_back(tail_revenue_certificate(s, D, F));
    for (auto& cert : core_bound_certificates(s, D, F, c)) certs.push_back(std::move(cert));
    if (inst.m <= 2) certs.push_back(core_decomposition_certificate(D, F, c));
    if (F.kind() != Matroid::Kind::explicit_table) {
        for (auto& cert : ex_ante_factor_certificates(D, F, c)) certs.push_back(std::move(cert));
        if (in_scaled_polytope(F, c.q, Rat(1, 2)))
            certs.push_back(prophet_certificate(D, F, c));
    }
    if (F.kind() == Matroid::Kind::uniform && F.uniform_cap() >= F.ground_size()) {
        for (auto& cert : additive_certificates(D, c)) certs.push_back(std::move(cert));
    }
}

void append_stitching_suite(const Instance& inst, const CertifyArgs& args,
                            std::vector<BoundCertificate>& certs) {
    if (!inst.ex_ante)
        throw parse_error("stitching suite needs per-agent ex_ante caps in the instance");
    size_t n = static_cast<size_t>(inst.n);
    std::vector<ExAnteConstraint> cons;
    std::vector<TwoPartTariff> tariffs;
    Rat standalone_sum = 0;
    for (size_t i = 0; i < n; ++i) {
        cons.push_back(make_ex_ante(inst.dists[i], (*inst.ex_ante)[i]));
        tariffs.push_back(canonical_tariff(inst.dists[i], inst.feas[i], cons.back()));
        standalone_sum += exact_tariff_revenue(tariffs.back(), inst.dists[i], inst.feas[i]);
    }
    std::vector<int> order(n);
    for (size_t i = 0; i < n; ++i) order[i] = static_cast<int>(i);
    SequentialTariff mech = stitch(tariffs, cons, order);
    ExactSequentialResult exact = run_sequential_exact(mech, inst.dists, inst.feas);

    certs.push_back(finish_certificate(
        "stitching_half_revenue",
        exact_term("half_standalone_sum", standalone_sum / 2),
        exact_term("stitched_revenue", exact.revenue),
        {exact_term("standalone_sum", standalone_sum)}, 0.0));

    Rat min_avail = 1;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < inst.m; ++j) min_avail = rat_min(min_avail, exact.availability[i][j]);
    certs.push_back(finish_certificate("availability_floor", exact_term("half", make_rat(1, 2)),
                                       exact_term("min_availability", min_avail), {}, 0.0));

    // Participation inheritance: a type that joins its standalone tariff
    // joins the stitched mechanism.
    long participation_violations = 0;
    for (size_t i = 0; i < n; ++i) {
        auto types = enumerate_profiles(inst.dists[i], kJointProfileCap);
        for (size_t t = 0; t < types.size(); ++t) {
            DemandOutcome solo = run_single(tariffs[i], BuyerType{types[t].values, inst.feas[i]},
                                            full_set(static_cast<int>(inst.m)));
            if (solo.participates && !exact.joins[i][t]) participation_violations++;
        }
    }
    certs.push_back(finish_certificate(
        "participation_inheritance", exact_term("violations", Rat(participation_violations)),
        exact_term("zero", Rat(0)), {}, 0.0));

    // Purchase retention: an item bought standalone stays bought whenever it
    // survives to the agent's turn.
    long retention_violations = 0;
    for (size_t i = 0; i < n; ++i) {
        auto types = enumerate_profiles(inst.dists[i], kJointProfileCap);
        for (const auto& type : types) {
            BuyerType buyer{type.values, inst.feas[i]};
            ItemSet solo =
                best_bundle(buyer, mech.prices[i], full_set(static_cast<int>(inst.m)),
                            mech.limits[i])
                    .bundle;
            ItemSet all = full_set(static_cast<int>(inst.m));
            for (ItemSet avail = 0; avail <= all; ++avail) {
                ItemSet kept = best_bundle(buyer, mech.prices[i], avail, mech.limits[i]).bundle;
                if (solo & avail & ~kept) retention_violations++;
                if (avail == all) break;
            }
        }
    }
    certs.push_back(finish_certificate(
        "purchase_retention", exact_term("violations", Rat(retention_violations)),
        exact_term("zero", Rat(0)), {}, 0.0));

    if (args.trials > 0) {
        if (!args.seed_set) throw parse_error("--seed is required for Monte Carlo cross-checks");
        McSequentialResult mc =
            run_sequential_mc(mech, inst.dists, inst.feas, args.trials, args.seed);
        certs.push_back(finish_certificate(
            "monte_carlo_agreement",
            mc_term("abs_gap", std::abs(mc.mean - rat_d(exact.revenue)), mc.std_error),
            float_term("zero", 0.0), {mc_term("mc_mean", mc.mean, mc.std_error)}, 1e-9));
    }
}

int cmd_certify(const CertifyArgs& args) {
    Instance inst = instance_from_file(args.instance);
    Rat scale = parse_rat(args.rhs_scale);

    std::vector<BoundCertificate> certs;
    if (inst.n == 1) append_single_agent_suite(inst, certs);
    else append_stitching_suite(inst, args, certs);
    for (auto& cert : certs) cert = scale_rhs(std::move(cert), scale);

    size_t passed = 0;
    for (const auto& cert : certs)
        if (cert.holds) passed++;

    std::ostringstream canon;
    canon << "certify|" << args.instance << "|seed=" << (args.seed_set ? args.seed : 0)
          << "|trials=" << args.trials << "|tol=" << fmt_double(args.tolerance)
          << "|scale=" << rat_str(scale);

    if (args.format == "csv") {
        std::ostringstream csv;
        csv << certificate_csv_header() << "\n";
        for (const auto& cert : certs) csv << certificate_to_csv_row(cert) << "\n";
        csv << "summary," << (passed == certs.size() ? 1 : 0) << "," << passed << ","
            << certs.size() << "," << config_hash(canon.str()) << "\n";
        emit(args.out, csv.str());
    } else {
        Json report;
        report["command"] = "certify";
        report["instance"] = args.instance;
        if (args.seed_set) report["seed"] = args.seed;
        if (args.trials > 0) report["trials"] = args.trials;
        report["tolerance"] = fmt_double(args.tolerance);
        if (scale != 1) report["rhs_scale"] = rat_str(scale);
        report["config_hash"] = config_hash(canon.str());
        Json rows = Json::array();
        for (const auto& cert : certs) rows.push_back(certificate_to_json(cert));
        report["certificates"] = rows;
        report["summary"] =
            Json{{"total", certs.size()}, {"passed", passed}, {"failed", certs.size() - passed}};
        emit(args.out, report.dump(2));
    }
    return passed == certs.size() ? kExitPass : kExitCertFail;
}

struct SynthArgs {
    std::string instance;
    std::string out;
    std::string report;
    std::string format = "json";
    std::string epsilon;
    uint64_t seed = 0;
    bool seed_set = false;
    uint64_t trials = 2000;
};

int cmd_synthesize(const SynthArgs& args) {
    if (!args.seed_set) throw parse_error("--seed is required for synthesize");
    Instance inst = instance_from_file(args.instance);
    for (int i = 1; i < inst.n; ++i) {
        if (!(inst.dists[i].items() == inst.dists[0].items()) || !(inst.feas[i] == inst.feas[0]))
            throw parse_error("synthesize needs a symmetric instance (shared distribution and constraint)");
    }
    SymmetricInstance sym{inst.n, inst.dists[0], inst.feas[0]};
    Rat eps;
    if (args.epsilon.empty()) {
        eps = make_rat(1, 8);
        while (eps > Rat(1, 2 * inst.n)) eps /= 2;
    } else {
        eps = parse_rat(args.epsilon);
    }
    SymmetricSolution sol = synthesize(sym, eps, args.trials, args.seed);

    std::vector<Rat> standalone(inst.n, sol.fee);
    emit(args.out, mechanism_to_json(sol.mechanism, standalone).dump(2));

    std::ostringstream canon;
    canon << "synthesize|" << args.instance << "|seed=" << args.seed << "|eps=" << rat_str(eps)
          << "|trials=" << args.trials;
    Json report;
    report["command"] = "synthesize";
    report["instance"] = args.instance;
    report["seed"] = args.seed;
    report["epsilon"] = rat_str(eps);
    report["trials"] = args.trials;
    report["config_hash"] = config_hash(canon.str());
    report["branch"] = sol.chosen_branch == 0 ? "bundle_fee" : "item_pricing";
    Json q = Json::array();
    for (const auto& x : sol.q) q.push_back(rat_to_json(x));
    report["q"] = q;
    Json prices = Json::array();
    for (const auto& p : sol.prices) prices.push_back(rat_to_json(p));
    report["prices"] = prices;
    report["fee"] = rat_to_json(sol.fee);
    report["item_branch_objective"] = rat_to_json(sol.item_objective);
    report["bundle_branch_estimate"] = fmt_double(sol.bundle_estimate);
    report["mixture_components"] = sol.bq.components.size();
    report["chosen_component"] = sol.chosen_component;
    report["evaluation"] = sol.exact_eval ? "exact" : "montecarlo";
    if (sol.exact_eval) report["expected_revenue"] = rat_to_json(sol.exact_revenue);
    else report["expected_revenue"] = fmt_double(sol.est_revenue);
    report["revenue_sigma"] = fmt_double(sol.est_sigma);
    if (args.report.empty()) {
        std::cerr << report.dump(2) << "\n";
    } else {
        write_file(args.report, report.dump(2));
    }
    return kExitPass;
}

struct EvalArgs {
    std::string mechanism;
    std::string instance;
    std::string out;
    std::string format = "json";
    uint64_t seed = 0;
    bool seed_set = false;
    uint64_t trials = 0;
    bool exact = false;
};

int cmd_evaluate(const EvalArgs& args) {
    Instance inst = instance_from_file(args.instance);
    MechanismFile mf = mechanism_from_file(args.mechanism);

    SequentialTariff mech;
    if (mf.sequential) {
        mech = *mf.sequential;
    } else if (mf.single) {
        mech.order = {0};
        mech.fees = {mf.single->entry_fee};
        mech.prices = {mf.single->prices};
        mech.limits = {mf.single->demand_limit};
    } else {
        throw parse_error("mechanism file holds no mechanism");
    }
    if (mech.num_agents() != inst.n)
        throw parse_error("mechanism/instance agent count mismatch");
    if (static_cast<size_t>(mech.num_items()) != inst.m)
        throw parse_error("mechanism/instance item count mismatch");

    std::ostringstream canon;
    canon << "evaluate|" << args.mechanism << "|" << args.instance
          << "|seed=" << (args.seed_set ? args.seed : 0) << "|trials=" << args.trials
          << "|exact=" << (args.exact ? 1 : 0);
    std::string hash = config_hash(canon.str());

    std::optional<Rat> standalone_sum;
    if (mf.standalone_fees) {
        Rat total = 0;
        for (int i = 0; i < inst.n; ++i) {
            TwoPartTariff solo{(*mf.standalone_fees)[i], mech.prices[i], mech.limits[i]};
            total += exact_tariff_revenue(solo, inst.dists[i], inst.feas[i]);
        }
        standalone_sum = total;
    }

    if (args.exact) {
        ExactSequentialResult res = run_sequential_exact(mech, inst.dists, inst.feas);
        if (args.format == "csv") {
            std::ostringstream csv;
            csv << "mode,revenue,config\n";
            csv << "exact," << rat_str(res.revenue) << "," << hash << "\n";
            if (standalone_sum) {
                csv << "standalone_sum," << rat_str(*standalone_sum) << ",\n";
                csv << "half_margin," << rat_str(res.revenue - *standalone_sum / 2) << ",\n";
            }
            emit(args.out, csv.str());
        } else {
            Json report;
            report["command"] = "evaluate";
            report["mode"] = "exact";
            report["config_hash"] = hash;
            report["revenue"] = rat_to_json(res.revenue);
            Json pays = Json::array();
            for (const auto& p : res.agent_payment) pays.push_back(rat_to_json(p));
            report["agent_payment"] = pays;
            Json avail = Json::array();
            for (const auto& row : res.availability) {
                Json r = Json::array();
                for (const auto& p : row) r.push_back(rat_to_json(p));
                avail.push_back(r);
            }
            report["availability"] = avail;
            if (standalone_sum) {
                report["standalone_sum"] = rat_to_json(*standalone_sum);
                report["half_margin"] = rat_to_json(res.revenue - *standalone_sum / 2);
            }
            emit(args.out, report.dump(2));
        }
        return kExitPass;
    }

    if (args.trials == 0) throw parse_error("Monte Carlo evaluation needs --trials >= 1");
    if (!args.seed_set) throw parse_error("--seed is required for Monte Carlo evaluation");
    McSequentialResult res = run_sequential_mc(mech, inst.dists, inst.feas, args.trials,
                                               args.seed, 2000, true);
    if (args.format == "csv") {
        std::ostringstream csv;
        csv << "trial,revenue";
        for (int i = 0; i < inst.n; ++i) csv << ",pay_" << i;
        csv << "\n";
        for (uint64_t t = 0; t < res.trials; ++t) {
            csv << t << "," << fmt_double(res.trial_revenue[t]);
            for (int i = 0; i < inst.n; ++i) csv << "," << fmt_double(res.trial_agent_payment[t][i]);
            csv << "\n";
        }
        csv << "summary," << fmt_double(res.mean) << ",stderr=" << fmt_double(res.std_error)
            << ",seed=" << args.seed << ",config=" << hash << "\n";
        if (standalone_sum) {
            csv << "standalone_sum," << rat_str(*standalone_sum) << "\n";
            csv << "half_margin," << fmt_double(res.mean - rat_d(*standalone_sum) / 2) << "\n";
        }
        emit(args.out, csv.str());
    } else {
        Json report;
        report["command"] = "evaluate";
        report["mode"] = "montecarlo";
        report["seed"] = args.seed;
        report["trials"] = args.trials;
        report["config_hash"] = hash;
        report["mean"] = fmt_double(res.mean);
        report["std_error"] = fmt_double(res.std_error);
        Json pays = Json::array();
        for (const auto& p : res.agent_payment) pays.push_back(fmt_double(p));
        report["agent_payment"] = pays;
        if (standalone_sum) {
            report["standalone_sum"] = rat_to_json(*standalone_sum);
            report["half_margin"] = fmt_double(res.mean - rat_d(*standalone_sum) / 2);
        }
        emit(args.out, report.dump(2));
    }
    return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-part tariff mechanism laboratory"};
    app.require_subcommand(1);

    CertifyArgs cargs;
    CLI::App* certify = app.add_subcommand("certify", "run bound certificates on an instance");
    certify->add_option("--instance", cargs.instance, "instance JSON path")->required();
    certify->add_option("--seed", cargs.seed, "rng seed")->envname("TARIFFLAB_SEED");
    certify->add_option("--trials", cargs.trials, "Monte Carlo cross-check trials")
        ->envname("TARIFFLAB_TRIALS");
    certify->add_option("--tolerance", cargs.tolerance, "float tolerance for ln2 constants")
        ->envname("TARIFFLAB_TOLERANCE");
    certify->add_option("--out", cargs.out, "report path (stdout when omitted)")
        ->envname("TARIFFLAB_OUT");
    certify->add_option("--format", cargs.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}))
        ->envname("TARIFFLAB_FORMAT");
    certify->add_option("--rhs-scale", cargs.rhs_scale,
                        "multiply every certificate rhs (validation hook)");

    SynthArgs sargs;
    CLI::App* synth = app.add_subcommand("synthesize", "build a sequential tariff for symmetric agents");
    synth->add_option("--instance", sargs.instance, "symmetric instance JSON path")->required();
    synth->add_option("--seed", sargs.seed, "rng seed")->envname("TARIFFLAB_SEED");
    synth->add_option("--trials", sargs.trials, "sampling budget")->envname("TARIFFLAB_TRIALS");
    synth->add_option("--epsilon", sargs.epsilon, "quantile grid step, e.g. 1/8")
        ->envname("TARIFFLAB_EPSILON");
    synth->add_option("--out", sargs.out, "mechanism JSON path (stdout when omitted)");
    synth->add_option("--report", sargs.report, "report path (stderr when omitted)");
    synth->add_option("--format", sargs.format, "json")->check(CLI::IsMember({"json"}));

    EvalArgs eargs;
    CLI::App* eval = app.add_subcommand("evaluate", "evaluate a mechanism on an instance");
    eval->add_option("--mechanism", eargs.mechanism, "mechanism JSON path")->required();
    eval->add_option("--instance", eargs.instance, "instance JSON path")->required();
    eval->add_option("--seed", eargs.seed, "rng seed")->envname("TARIFFLAB_SEED");
    eval->add_option("--trials", eargs.trials, "Monte Carlo trials")->envname("TARIFFLAB_TRIALS");
    eval->add_flag("--exact", eargs.exact, "exact enumeration instead of Monte Carlo");
    eval->add_option("--out", eargs.out, "report path (stdout when omitted)");
    eval->add_option("--format", eargs.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));

    try {
        app.parse(argc, argv);
        cargs.seed_set = certify->count("--seed") > 0 || std::getenv("TARIFFLAB_SEED");
        sargs.seed_set = synth->count("--seed") > 0 || std::getenv("TARIFFLAB_SEED");
        eargs.seed_set = eval->count("--seed") > 0 || std::getenv("TARIFFLAB_SEED");
        if (certify->parsed()) return cmd_certify(cargs);
        if (synth->parsed()) return cmd_synthesize(sargs);
        if (eval->parsed()) return cmd_evaluate(eargs);
        return kExitUsage;
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    } catch (const parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const scale_error& e) {
        std::cerr << "scale limit: " << e.what() << "\n";
        return kExitScale;
    } catch (const precondition_error& e) {
        std::cerr << "precondition: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
