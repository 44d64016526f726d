#include "tarifflab/dist.hpp"

#include <algorithm>

namespace tarifflab {

ValueDist::ValueDist(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
    if (atoms_.empty()) throw std::invalid_argument("distribution needs at least one atom");
    Rat total = 0;
    for (size_t i = 0; i < atoms_.size(); ++i) {
        if (atoms_[i].prob <= 0) throw std::invalid_argument("atom probabilities must be positive");
        if (i > 0 && !(atoms_[i - 1].value < atoms_[i].value))
            throw std::invalid_argument("atom values must be strictly increasing");
        total += atoms_[i].prob;
    }
    if (total != 1) throw std::invalid_argument("atom probabilities must sum to 1");
}

ValueDist ValueDist::point_mass(const Rat& v) { return ValueDist({{v, Rat(1)}}); }

Rat ValueDist::cdf(const Rat& v) const {
    Rat acc = 0;
    for (const auto& a : atoms_) {
        if (a.value > v) break;
        acc += a.prob;
    }
    return acc;
}

Rat ValueDist::tail_prob(const Rat& v) const { return Rat(1) - cdf(v); }

Rat ValueDist::tail_prob_incl(const Rat& v) const {
    Rat acc = 0;
    for (const auto& a : atoms_)
        if (a.value >= v) acc += a.prob;
    return acc;
}

Rat ValueDist::expectation() const {
    Rat acc = 0;
    for (const auto& a : atoms_) acc += a.value * a.prob;
    return acc;
}

Rat ValueDist::variance() const {
    Rat mean = expectation();
    Rat acc = 0;
    for (const auto& a : atoms_) {
        Rat dev = a.value - mean;
        acc += dev * dev * a.prob;
    }
    return acc;
}

Rat quantile_price(const ValueDist& d, const Rat& q) {
    if (q < 0 || q > 1) throw std::invalid_argument("quantile_price: q outside [0,1]");
    if (q == 1) return Rat(0);
    // Tail probability is decreasing in the price, so the first support value
    // whose strict tail fits under q is the conservative ex ante price.
    Rat above = 1;
    for (const auto& a : d.atoms()) {
        above -= a.prob;  // Pr[V > value]
        if (above <= q) return a.value;
    }
    return d.max_value();  // unreachable: tail at the top atom is 0
}

Rat sale_price(const ValueDist& d, const Rat& q) {
    if (q < 0 || q > 1) throw std::invalid_argument("sale_price: q outside [0,1]");
    if (q == 0) return d.max_value();
    Rat incl = 0;
    const auto& atoms = d.atoms();
    for (size_t i = atoms.size(); i-- > 0;) {
        incl += atoms[i].prob;  // Pr[V >= value]
        if (incl >= q) return atoms[i].value;
    }
    return d.min_value();  // q <= 1 always lands above
}

Rat revenue_curve(const ValueDist& d, const Rat& q) { return q * sale_price(d, q); }

ValueDist condition(const ValueDist& d, const Rat& threshold, Side side) {
    std::vector<Atom> kept;
    Rat mass = 0;
    for (const auto& a : d.atoms()) {
        bool in = side == Side::core ? a.value <= threshold : a.value > threshold;
        if (in) {
            kept.push_back(a);
            mass += a.prob;
        }
    }
    if (kept.empty())
        throw precondition_error("conditioning event has zero mass");
    for (auto& a : kept) a.prob /= mass;
    return ValueDist(std::move(kept));
}

ValueDist shift(const ValueDist& d, const Rat& beta) {
    std::vector<Atom> atoms = d.atoms();
    for (auto& a : atoms) a.value -= beta;
    return ValueDist(std::move(atoms));
}

ValueDist clamp_nonneg(const ValueDist& d) {
    Rat below = 0;
    std::vector<Atom> kept;
    for (const auto& a : d.atoms()) {
        if (a.value <= 0) below += a.prob;
        else kept.push_back(a);
    }
    if (below > 0) kept.insert(kept.begin(), Atom{Rat(0), below});
    return ValueDist(std::move(kept));
}

Rat single_item_opt_rev(const ValueDist& d, const Rat& qcap) {
    if (qcap < 0 || qcap > 1) throw std::invalid_argument("single_item_opt_rev: qcap outside [0,1]");
    Rat best = 0;
    Rat incl = 0;
    const auto& atoms = d.atoms();
    for (size_t i = atoms.size(); i-- > 0;) {
        incl += atoms[i].prob;
        if (incl > qcap) break;
        if (atoms[i].value > 0) best = rat_max(best, atoms[i].value * incl);
    }
    // Cap point: a scaled lottery at the conservative price sells with
    // probability exactly qcap.
    Rat beta = quantile_price(d, qcap);
    if (beta > 0) best = rat_max(best, qcap * beta);
    return best;
}

namespace {

// Upper concave envelope of (grid[i], value[i]) by monotone chain; returns
// envelope values at every grid point.
std::vector<Rat> upper_envelope(const std::vector<Rat>& grid, const std::vector<Rat>& value) {
    size_t n = grid.size();
    std::vector<size_t> hull;
    for (size_t i = 0; i < n; ++i) {
        while (hull.size() >= 2) {
            size_t a = hull[hull.size() - 2], b = hull[hull.size() - 1];
            // keep b only if it lies strictly above segment (a, i)
            Rat lhs = (value[b] - value[a]) * (grid[i] - grid[a]);
            Rat rhs = (value[i] - value[a]) * (grid[b] - grid[a]);
            if (lhs > rhs) break;
            hull.pop_back();
        }
        hull.push_back(i);
    }
    std::vector<Rat> env(n);
    for (size_t h = 0; h + 1 < hull.size(); ++h) {
        size_t a = hull[h], b = hull[h + 1];
        Rat slope = (value[b] - value[a]) / (grid[b] - grid[a]);
        for (size_t i = a; i <= b; ++i) env[i] = value[a] + slope * (grid[i] - grid[a]);
    }
    if (hull.size() == 1) env[hull[0]] = value[hull[0]];
    return env;
}

}  // namespace

IronedCurve iron_on_grid(const ValueDist& d, std::vector<Rat> grid) {
    if (grid.size() < 2 || grid.front() != 0)
        throw std::invalid_argument("iron: grid must start at 0 with at least two points");
    for (size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i - 1] < grid[i])) throw std::invalid_argument("iron: grid must be increasing");
    IronedCurve curve;
    curve.epsilon = 0;
    curve.grid = std::move(grid);
    curve.revenue.reserve(curve.grid.size());
    for (const auto& q : curve.grid) curve.revenue.push_back(revenue_curve(d, q));
    curve.envelope = upper_envelope(curve.grid, curve.revenue);
    curve.slopes.reserve(curve.grid.size() - 1);
    for (size_t i = 0; i + 1 < curve.grid.size(); ++i)
        curve.slopes.push_back((curve.envelope[i + 1] - curve.envelope[i]) /
                               (curve.grid[i + 1] - curve.grid[i]));
    return curve;
}

IronedCurve iron(const ValueDist& d, const Rat& epsilon) {
    if (epsilon <= 0 || epsilon > Rat(1, 2)) throw std::invalid_argument("iron: need 0 < eps <= 1/2");
    Rat inv = 1 / epsilon;
    if (inv.get_den() != 1) throw std::invalid_argument("iron: 1/eps must be an integer");
    long k = static_cast<long>(inv.get_num().get_si());
    std::vector<Rat> grid;
    grid.reserve(k + 1);
    for (long z = 0; z <= k; ++z) grid.push_back(Rat(z) * epsilon);
    IronedCurve curve = iron_on_grid(d, std::move(grid));
    curve.epsilon = epsilon;
    return curve;
}

size_t sample_index(const ValueDist& d, RngStream& stream) {
    uint64_t r = stream.next_u64();
    // u = r / 2^64 compared exactly against the running CDF
    mpz_class rz;
    mpz_import(rz.get_mpz_t(), 1, 1, sizeof(r), 0, 0, &r);
    mpz_class two64 = mpz_class(1) << 64;
    Rat cum = 0;
    for (size_t i = 0; i < d.atoms().size(); ++i) {
        cum += d.atoms()[i].prob;
        // r/2^64 < cum  <=>  r * den < num * 2^64
        if (rz * cum.get_den() < cum.get_num() * two64) return i;
    }
    return d.atoms().size() - 1;
}

Rat sample(const ValueDist& d, RngStream& stream) {
    return d.atoms()[sample_index(d, stream)].value;
}

ProductDist::ProductDist(std::vector<ValueDist> items) : items_(std::move(items)) {
    if (items_.empty()) throw std::invalid_argument("product distribution needs at least one item");
}

unsigned long long ProductDist::num_profiles() const {
    unsigned long long total = 1;
    for (const auto& d : items_) {
        total *= d.size();
        if (total > (1ull << 40)) return 1ull << 40;  // callers only compare against caps
    }
    return total;
}

std::vector<Rat> ProductDist::sample_profile(RngStream& stream) const {
    std::vector<Rat> v;
    v.reserve(items_.size());
    for (const auto& d : items_) v.push_back(sample(d, stream));
    return v;
}

std::vector<TypeProfile> enumerate_profiles(const ProductDist& D, unsigned long long cap) {
    if (D.num_profiles() > cap) throw scale_error("type space exceeds enumeration cap");
    std::vector<TypeProfile> out;
    out.push_back({{}, Rat(1)});
    for (const auto& d : D.items()) {
        std::vector<TypeProfile> next;
        next.reserve(out.size() * d.size());
        for (const auto& t : out) {
            for (const auto& a : d.atoms()) {
                TypeProfile p = t;
                p.values.push_back(a.value);
                p.prob *= a.prob;
                next.push_back(std::move(p));
            }
        }
        out = std::move(next);
    }
    return out;
}

}  // namespace tarifflab
