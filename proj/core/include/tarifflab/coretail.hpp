#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tarifflab/dist.hpp"
#include "tarifflab/matroid.hpp"
#include "tarifflab/mechanism.hpp"
#include "tarifflab/oracle.hpp"

namespace tarifflab {

enum class Provenance { exact, lp, montecarlo, float64 };

struct TermValue {
    std::string name;
    std::optional<Rat> exact;  // absent for montecarlo / float-combined terms
    double approx = 0;
    Provenance prov = Provenance::exact;
    double sigma = 0;
};

TermValue exact_term(std::string name, Rat value, Provenance prov = Provenance::exact);
TermValue float_term(std::string name, double value);
TermValue mc_term(std::string name, double value, double sigma);

// lhs <= rhs + tolerance + 3 sigma; compared exactly when both sides are
// rational and the tolerance is zero.
struct BoundCertificate {
    std::string name;
    TermValue lhs;
    TermValue rhs;
    std::vector<TermValue> terms;
    double tolerance = 0;
    bool holds = false;
};

BoundCertificate finish_certificate(std::string name, TermValue lhs, TermValue rhs,
                                    std::vector<TermValue> terms, double tolerance);

enum class SplitVariant { section5, appendixC };

// Core-tail decomposition state: thresholds, tail probabilities and the
// per-item conditional distributions.
struct CoreTailSplit {
    SplitVariant variant;
    std::vector<Rat> beta;
    Rat tau;                    // section5: minimal uniform threshold offset
    Rat r;                      // appendixC: sum of capped per-item revenues
    std::vector<Rat> thresholds;
    std::vector<Rat> tail_probs;
    std::vector<ValueDist> core;
    std::vector<std::optional<ValueDist>> tail;  // absent when the tail is empty
    Rat core_all_prob;          // P(every item in the core)
};

// section5: t_j = beta_j + tau with tau the smallest candidate offset making
// P(all core) >= 1/2; appendixC: t_j = max(beta_j, r) with
// r = sum_j single_item_opt_rev(D_j, q_j).
CoreTailSplit split(const ProductDist& D, const ExAnteConstraint& c, SplitVariant variant);

// Exact decomposition bound:
//   Rev^q(D,F) <= Val^q(core,F) + sum_A xi_A Rev(tail_A, F|_A).
BoundCertificate core_decomposition_certificate(const ProductDist& D, const Matroid& F,
                                                const ExAnteConstraint& c);

// Tail side: sum_A xi_A Rev(tail_A, F|_A) <= 8(1+ln2) SRev^q_beta.
BoundCertificate tail_revenue_certificate(const CoreTailSplit& s, const ProductDist& D,
                                          const Matroid& F);

// Core side: the welfare split, the bundle-median concentration bound and the
// recovery of the shifted core by bundle + floored item pricing.
std::vector<BoundCertificate> core_bound_certificates(const CoreTailSplit& s,
                                                      const ProductDist& D, const Matroid& F,
                                                      const ExAnteConstraint& c);

// Composite single-agent bound:
//   Rev^q <= 6 BRev(D-beta) + 8(1+ln2+1/ln2) SRev^q_beta + beta.q.
BoundCertificate single_agent_tariff_certificate(const ProductDist& D, const Matroid& F,
                                                 const ExAnteConstraint& c);

// Unconstrained constant factor: Rev <= 31.1 max{SRev, BRev}, exact rationals.
BoundCertificate constant_factor_certificate(const ProductDist& D, const Matroid& F);

// Ex ante tariff factors: Rev^q <= 35.1 TRev^q(D, F'), and the sharper 33.1
// variant when q lies in the half polytope. F' defaults to F for uniform and
// partition constraints and must be supplied otherwise.
std::vector<BoundCertificate> ex_ante_factor_certificates(
    const ProductDist& D, const Matroid& F, const ExAnteConstraint& c,
    const std::optional<Matroid>& demand_limit = {});

// Prophet bound for partition or uniform F with q in (1/2) P_F:
//   beta.q <= 2 * (exact revenue of posting prices beta).
BoundCertificate prophet_certificate(const ProductDist& D, const Matroid& F,
                                     const ExAnteConstraint& c);

// Additive-buyer suite: per-item variance and tail conditions plus the
// factor-7 tariff bound, with the intermediate core/tail recoveries reported.
std::vector<BoundCertificate> additive_certificates(const ProductDist& D,
                                                    const ExAnteConstraint& c);

// Rev(D, F) <= 4m * SRev(D, unit demand).
BoundCertificate unit_demand_reduction_certificate(const ProductDist& D, const Matroid& F);

}  // namespace tarifflab
