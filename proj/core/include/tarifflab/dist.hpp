#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "tarifflab/rational.hpp"
#include "tarifflab/rng.hpp"

namespace tarifflab {

struct Atom {
    Rat value;
    Rat prob;

    bool operator==(const Atom& other) const {
        return value == other.value && prob == other.prob;
    }
};

enum class Side { core, tail };

// Finite discrete value distribution. Atoms are strictly increasing in value,
// each with positive mass, masses summing to exactly 1. Values may be
// negative (shifted distributions keep their support).
class ValueDist {
public:
    explicit ValueDist(std::vector<Atom> atoms);

    static ValueDist point_mass(const Rat& v);

    const std::vector<Atom>& atoms() const { return atoms_; }
    size_t size() const { return atoms_.size(); }
    const Rat& min_value() const { return atoms_.front().value; }
    const Rat& max_value() const { return atoms_.back().value; }

    // Pr[V <= v], right-continuous step function.
    Rat cdf(const Rat& v) const;
    // Pr[V > v]
    Rat tail_prob(const Rat& v) const;
    // Pr[V >= v]
    Rat tail_prob_incl(const Rat& v) const;

    Rat expectation() const;
    // Variance; exact.
    Rat variance() const;

    bool operator==(const ValueDist& other) const = default;

private:
    std::vector<Atom> atoms_;
};

// Ex ante price beta(q): smallest supported price p with Pr[V > p] <= q.
// q = 1 returns 0 (a fully unconstrained item carries no ex ante price);
// q = 0 returns the maximum support value. Sale probability at the returned
// price never exceeds q when the buyer declines at indifference.
Rat quantile_price(const ValueDist& d, const Rat& q);

// Seller-side inverse used by revenue curves: largest supported value v with
// Pr[V >= v] >= q, i.e. the highest price that still sells with probability
// at least q when the buyer accepts at indifference. q = 0 returns the
// maximum support value (the revenue curve contributes q*price = 0 there).
Rat sale_price(const ValueDist& d, const Rat& q);

// Revenue curve point R(q) = q * sale_price(q).
Rat revenue_curve(const ValueDist& d, const Rat& q);

// D | v <= t (core) or D | v > t (tail), renormalized.
// Throws precondition_error when the conditioning event has zero mass.
ValueDist condition(const ValueDist& d, const Rat& threshold, Side side);

// D - beta: every atom shifted left by beta; negative values retained.
ValueDist shift(const ValueDist& d, const Rat& beta);

// Values below zero collapsed onto an atom at 0. Used where a shifted core
// distribution is read as the buyer's per-item surplus (never negative).
ValueDist clamp_nonneg(const ValueDist& d);

// Optimal single-price revenue under an ex ante cap:
// max q'*price over the atom-induced quantile candidates with sale
// probability <= qcap, plus the cap point qcap*quantile_price(qcap).
// qcap = 1 is the unconstrained single-item optimum.
Rat single_item_opt_rev(const ValueDist& d, const Rat& qcap);

// Upper concave envelope machinery for quantile-space revenue curves.
// grid is strictly increasing; envelope[i] >= revenue[i] with equality at
// hull vertices; slopes are per-cell and non-increasing.
struct IronedCurve {
    Rat epsilon;                 // 0 when built on a non-uniform grid
    std::vector<Rat> grid;
    std::vector<Rat> revenue;
    std::vector<Rat> envelope;
    std::vector<Rat> slopes;     // ironed virtual value per cell
};

// Envelope of R(q) on the uniform grid {0, eps, ..., 1}. 1/eps must be an
// integer and eps <= 1/2.
IronedCurve iron(const ValueDist& d, const Rat& epsilon);

// Envelope of R(q) on an arbitrary increasing grid starting at 0.
IronedCurve iron_on_grid(const ValueDist& d, std::vector<Rat> grid);

// Draws one value; atom probabilities are matched by exact rational
// comparison against a 64-bit uniform draw.
Rat sample(const ValueDist& d, RngStream& stream);

// Same draw, returning the atom index.
size_t sample_index(const ValueDist& d, RngStream& stream);

// Independent per-item value distributions.
class ProductDist {
public:
    ProductDist() = default;
    explicit ProductDist(std::vector<ValueDist> items);

    size_t num_items() const { return items_.size(); }
    const ValueDist& item(size_t j) const { return items_.at(j); }
    const std::vector<ValueDist>& items() const { return items_; }

    // Product of joint support sizes.
    unsigned long long num_profiles() const;

    std::vector<Rat> sample_profile(RngStream& stream) const;

private:
    std::vector<ValueDist> items_;
};

// One joint value profile with its exact probability.
struct TypeProfile {
    std::vector<Rat> values;
    Rat prob;
};

// Full enumeration of the product support in lexicographic atom order.
// Throws scale_error when the support exceeds `cap` profiles.
std::vector<TypeProfile> enumerate_profiles(const ProductDist& D, unsigned long long cap);

}  // namespace tarifflab
