#include "testgen.hpp"

#include <algorithm>
#include <set>

namespace tarifflab::testgen {

int gen_int(RngStream& s, int lo, int hi) {
    return lo + static_cast<int>(s.next_u64() % static_cast<uint64_t>(hi - lo + 1));
}

ValueDist gen_dist(RngStream& s, int max_atoms, int max_value) {
    int k = gen_int(s, 2, max_atoms);
    std::set<int> values;
    while (static_cast<int>(values.size()) < k) values.insert(gen_int(s, 0, max_value));
    // random composition with small denominators
    std::vector<int> weights(k);
    int total = 0;
    for (int i = 0; i < k; ++i) {
        weights[i] = gen_int(s, 1, 6);
        total += weights[i];
    }
    std::vector<Atom> atoms;
    int i = 0;
    for (int v : values) atoms.push_back({Rat(v), make_rat(weights[i++], total)});
    return ValueDist(std::move(atoms));
}

ProductDist gen_product(RngStream& s, int m, int max_atoms, int max_value) {
    std::vector<ValueDist> items;
    for (int j = 0; j < m; ++j) items.push_back(gen_dist(s, max_atoms, max_value));
    return ProductDist(std::move(items));
}

Matroid gen_matroid(RngStream& s, int m, unsigned kinds) {
    std::vector<int> options;
    if (kinds & 1) options.push_back(0);
    if (kinds & 2) options.push_back(1);
    if (kinds & 4) options.push_back(2);
    int choice = options[gen_int(s, 0, static_cast<int>(options.size()) - 1)];
    if (choice == 0 || m == 1) return Matroid::uniform(m, gen_int(s, 1, m));
    // random partition
    int nparts = gen_int(s, 1, m);
    std::vector<std::vector<int>> parts(nparts);
    for (int j = 0; j < m; ++j) parts[gen_int(s, 0, nparts - 1)].push_back(j);
    std::vector<std::vector<int>> used;
    for (auto& p : parts)
        if (!p.empty()) used.push_back(p);
    std::vector<int> caps;
    for (const auto& p : used) caps.push_back(gen_int(s, 1, static_cast<int>(p.size())));
    Matroid P = Matroid::partition(m, used, caps);
    if (choice == 1) return P;
    // truncation keeps the matroid axioms and exercises the explicit variant
    int cut = gen_int(s, 1, std::max(1, P.rank(full_set(m))));
    std::vector<ItemSet> indep;
    for (ItemSet set = 0; set < (1u << m); ++set)
        if (P.is_independent(set) && set_size(set) <= cut) indep.push_back(set);
    return Matroid::explicit_from_independent_sets(m, indep);
}

std::vector<Rat> gen_q(RngStream& s, int m) {
    std::vector<Rat> q(m);
    for (int j = 0; j < m; ++j) {
        int roll = gen_int(s, 0, 9);
        if (roll == 0) q[j] = 0;
        else if (roll == 1) q[j] = 1;
        else {
            int den = gen_int(s, 2, 8);
            q[j] = make_rat(gen_int(s, 1, den), den);
        }
    }
    return q;
}

Rat polytope_fit(const Matroid& M, const std::vector<Rat>& q) {
    int m = M.ground_size();
    Rat worst = 0;  // max over S of q(S)/rank(S)
    ItemSet all = full_set(m);
    for (ItemSet set = 1; set <= all; ++set) {
        Rat total = 0;
        for (int j = 0; j < m; ++j)
            if (set & (1u << j)) total += q[j];
        int r = M.rank(set);
        if (r == 0) {
            if (total > 0) return Rat(0);  // unscalable: mass on a loop
        } else {
            Rat ratio = total / r;
            if (ratio > worst) worst = ratio;
        }
        if (set == all) break;
    }
    if (worst == 0) return Rat(1);
    return Rat(1) / worst;
}

std::vector<Rat> scale_into_polytope(const Matroid& M, std::vector<Rat> q, const Rat& b) {
    Rat fit = polytope_fit(M, q);
    if (fit == 0) {
        // zero out loop items, then refit
        for (int j = 0; j < M.ground_size(); ++j)
            if (M.rank(1u << j) == 0) q[j] = 0;
        fit = polytope_fit(M, q);
        if (fit == 0) return std::vector<Rat>(q.size(), Rat(0));
    }
    Rat scale = rat_min(Rat(1), b * fit);
    for (auto& v : q) v *= scale;
    return q;
}

Rat brute_max_weight(const Matroid& M, const std::vector<Rat>& w, ItemSet within) {
    int m = M.ground_size();
    Rat best = 0;
    ItemSet all = full_set(m) & within;
    for (ItemSet set = 0;; ++set) {
        ItemSet masked = set & all;
        if (masked == set && M.is_independent(set)) {
            Rat total = 0;
            for (int j = 0; j < m; ++j)
                if (set & (1u << j)) total += w[j];
            if (total > best) best = total;
        }
        if (set >= all) break;
    }
    return best;
}

}  // namespace tarifflab::testgen
