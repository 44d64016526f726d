#include "tarifflab/matroid.hpp"

#include <algorithm>
#include <numeric>

namespace tarifflab {

Matroid Matroid::uniform(int m, int k) {
    if (m < 1) throw std::invalid_argument("matroid: ground size must be positive");
    if (k < 0) throw std::invalid_argument("matroid: negative uniform cap");
    Matroid M;
    M.kind_ = Kind::uniform;
    M.m_ = m;
    M.avail_ = full_set(m);
    M.uniform_k_ = std::min(k, m);
    return M;
}

Matroid Matroid::partition(int m, const std::vector<std::vector<int>>& parts,
                           const std::vector<int>& caps) {
    if (m < 1) throw std::invalid_argument("matroid: ground size must be positive");
    if (parts.size() != caps.size())
        throw std::invalid_argument("matroid: parts/caps length mismatch");
    Matroid M;
    M.kind_ = Kind::partition;
    M.m_ = m;
    M.avail_ = full_set(m);
    M.part_of_.assign(m, -1);
    M.caps_ = caps;
    for (size_t p = 0; p < parts.size(); ++p) {
        if (caps[p] < 0) throw std::invalid_argument("matroid: negative part cap");
        for (int item : parts[p]) {
            if (item < 0 || item >= m) throw std::invalid_argument("matroid: item out of range");
            if (M.part_of_[item] != -1) throw std::invalid_argument("matroid: parts must be disjoint");
            M.part_of_[item] = static_cast<int>(p);
        }
    }
    for (int j = 0; j < m; ++j)
        if (M.part_of_[j] == -1) throw std::invalid_argument("matroid: parts must cover the ground set");
    return M;
}

Matroid Matroid::explicit_from_independent_sets(int m, const std::vector<ItemSet>& indep) {
    if (m < 1 || m > 16) throw std::invalid_argument("explicit matroid: ground size must be in [1,16]");
    Matroid M;
    M.kind_ = Kind::explicit_table;
    M.m_ = m;
    M.avail_ = full_set(m);
    size_t n = 1ull << m;
    std::vector<uint8_t> is_indep(n, 0);
    is_indep[0] = 1;
    for (ItemSet s : indep) {
        if (s & ~full_set(m)) throw std::invalid_argument("explicit matroid: set out of range");
        is_indep[s] = 1;
    }
    // downward closure
    for (ItemSet s = static_cast<ItemSet>(n - 1);; --s) {
        if (is_indep[s])
            for (int j = 0; j < m; ++j)
                if (s & (1u << j)) is_indep[s & ~(1u << j)] = 1;
        if (s == 0) break;
    }
    M.rank_table_.assign(n, 0);
    for (ItemSet s = 1; s < n; ++s) {
        if (is_indep[s]) {
            M.rank_table_[s] = static_cast<uint8_t>(set_size(s));
        } else {
            uint8_t best = 0;
            for (int j = 0; j < m; ++j)
                if (s & (1u << j)) best = std::max(best, M.rank_table_[s & ~(1u << j)]);
            M.rank_table_[s] = best;
        }
    }
    M.validate_explicit();
    return M;
}

void Matroid::validate_explicit() const {
    size_t n = rank_table_.size();
    for (ItemSet s = 0; s < n; ++s) {
        for (int e = 0; e < m_; ++e) {
            if (s & (1u << e)) continue;
            int d = rank_table_[s | (1u << e)] - rank_table_[s];
            if (d < 0 || d > 1) throw std::invalid_argument("explicit matroid: rank not unit-increasing");
            for (int f = e + 1; f < m_; ++f) {
                if (s & (1u << f)) continue;
                int lhs = rank_table_[s | (1u << e)] + rank_table_[s | (1u << f)];
                int rhs = rank_table_[s | (1u << e) | (1u << f)] + rank_table_[s];
                if (lhs < rhs) throw std::invalid_argument("explicit matroid: rank not submodular");
            }
        }
    }
}

int Matroid::base_rank(ItemSet s) const {
    switch (kind_) {
        case Kind::uniform:
            return std::min(set_size(s), uniform_k_);
        case Kind::partition: {
            std::vector<int> counts(caps_.size(), 0);
            for (int j = 0; j < m_; ++j)
                if (s & (1u << j)) counts[part_of_[j]]++;
            int r = 0;
            for (size_t p = 0; p < caps_.size(); ++p) r += std::min(counts[p], caps_[p]);
            return r;
        }
        case Kind::explicit_table:
            return rank_table_[s];
    }
    return 0;
}

int Matroid::rank(ItemSet s) const { return base_rank(s & avail_); }

bool Matroid::is_independent(ItemSet s) const {
    if (s & ~avail_) return false;
    return base_rank(s) == set_size(s);
}

Matroid Matroid::restricted(ItemSet avail) const {
    Matroid M = *this;
    M.avail_ &= avail;
    return M;
}

int Matroid::union_rank(int k, ItemSet s) const {
    if (k < 1) throw std::invalid_argument("union_rank: k must be >= 1");
    s &= avail_ & ground_mask();
    int best = set_size(s);  // T = empty
    // min over submasks T of |S \ T| + k * rank(T)
    for (ItemSet t = s; t; t = (t - 1) & s) {
        best = std::min(best, set_size(s & ~t) + k * rank(t));
    }
    return best;
}

bool Matroid::refines(const Matroid& coarser) const {
    if (m_ != coarser.m_) throw std::invalid_argument("refines: ground size mismatch");
    if (m_ > 16) throw scale_error("refines: ground set too large to enumerate");
    ItemSet all = ground_mask();
    for (ItemSet s = 0; s <= all; ++s) {
        if (is_independent(s) && !coarser.is_independent(s)) return false;
        if (s == all) break;
    }
    return true;
}

std::vector<ItemSet> Matroid::maximal_independent_sets() const {
    if (m_ > 16) throw scale_error("maximal_independent_sets: ground set too large");
    std::vector<ItemSet> indep;
    ItemSet all = ground_mask();
    for (ItemSet s = 0; s <= all; ++s) {
        if (is_independent(s)) indep.push_back(s);
        if (s == all) break;
    }
    std::vector<ItemSet> maximal;
    for (ItemSet s : indep) {
        bool extendable = false;
        for (int j = 0; j < m_ && !extendable; ++j)
            if (!(s & (1u << j)) && is_independent(s | (1u << j))) extendable = true;
        if (!extendable) maximal.push_back(s);
    }
    return maximal;
}

bool Matroid::operator==(const Matroid& other) const {
    if (m_ != other.m_) return false;
    if (m_ <= 16) {
        ItemSet all = ground_mask();
        for (ItemSet s = 0; s <= all; ++s) {
            if (rank(s) != other.rank(s) || is_independent(s) != other.is_independent(s))
                return false;
            if (s == all) break;
        }
        return true;
    }
    return kind_ == other.kind_ && avail_ == other.avail_ && uniform_k_ == other.uniform_k_ &&
           part_of_ == other.part_of_ && caps_ == other.caps_;
}

namespace {

struct GreedyKey {
    Rat primary;
    Rat secondary;
    int item;
};

}  // namespace

ItemSet max_weight_basis_lex(const Matroid& M, const std::vector<Rat>& primary,
                             const std::vector<Rat>& secondary, ItemSet restrict_to) {
    int m = M.ground_size();
    if (static_cast<int>(primary.size()) != m || static_cast<int>(secondary.size()) != m)
        throw std::invalid_argument("max_weight_basis: weight length mismatch");
    std::vector<GreedyKey> keys;
    keys.reserve(m);
    ItemSet allowed = restrict_to & M.avail_mask() & M.ground_mask();
    for (int j = 0; j < m; ++j) {
        if (!(allowed & (1u << j))) continue;
        if (primary[j] < 0) continue;
        if (primary[j] == 0 && secondary[j] <= 0) continue;
        keys.push_back({primary[j], secondary[j], j});
    }
    std::sort(keys.begin(), keys.end(), [](const GreedyKey& a, const GreedyKey& b) {
        if (a.primary != b.primary) return a.primary > b.primary;
        if (a.secondary != b.secondary) return a.secondary > b.secondary;
        return a.item < b.item;
    });
    ItemSet chosen = 0;
    for (const auto& k : keys) {
        ItemSet next = chosen | (1u << k.item);
        if (M.is_independent(next)) chosen = next;
    }
    return chosen;
}

ItemSet max_weight_basis(const Matroid& M, const std::vector<Rat>& weights,
                         ItemSet restrict_to) {
    std::vector<Rat> zero(weights.size(), Rat(0));
    // secondary all zero: only strictly positive weights are eligible
    return max_weight_basis_lex(M, weights, zero, restrict_to);
}

bool in_scaled_polytope(const Matroid& M, const std::vector<Rat>& q, const Rat& b) {
    int m = M.ground_size();
    if (static_cast<int>(q.size()) != m) throw std::invalid_argument("polytope: length mismatch");
    if (b <= 0 || b > 1) throw std::invalid_argument("polytope: scale must be in (0,1]");
    for (const auto& qi : q)
        if (qi < 0 || qi > 1) throw std::invalid_argument("polytope: q outside [0,1]^m");

    switch (M.kind()) {
        case Matroid::Kind::uniform:
        case Matroid::Kind::partition: {
            // Constraints separate across parts; within a part the binding set
            // of each size is the one with the largest coordinates.
            size_t nparts = M.kind() == Matroid::Kind::uniform ? 1 : M.part_caps().size();
            for (size_t p = 0; p < nparts; ++p) {
                int cap = M.kind() == Matroid::Kind::uniform ? M.uniform_cap() : M.part_caps()[p];
                std::vector<Rat> vals;
                for (int j = 0; j < m; ++j) {
                    bool in_part =
                        M.kind() == Matroid::Kind::uniform || M.part_of()[j] == static_cast<int>(p);
                    if (in_part && (M.avail_mask() & (1u << j))) vals.push_back(q[j]);
                    else if (in_part && q[j] > 0) return false;  // restricted-away item must be 0
                }
                std::sort(vals.begin(), vals.end(), std::greater<Rat>());
                Rat prefix = 0;
                for (size_t s = 0; s < vals.size(); ++s) {
                    prefix += vals[s];
                    if (prefix > b * std::min<int>(static_cast<int>(s) + 1, cap)) return false;
                }
            }
            return true;
        }
        case Matroid::Kind::explicit_table: {
            if (m > 16) throw scale_error("polytope: explicit matroid too large");
            ItemSet all = full_set(m);
            std::vector<Rat> sum(1ull << m);
            sum[0] = 0;
            for (ItemSet s = 1; s <= all; ++s) {
                ItemSet low = s & (~s + 1);
                int j = __builtin_ctz(low);
                sum[s] = sum[s & (s - 1)] + q[j];
                if (sum[s] > b * M.rank(s)) return false;
                if (s == all) break;
            }
            return true;
        }
    }
    return false;
}

Matroid restrict_and_relabel(const Matroid& M, ItemSet A) {
    A &= M.ground_mask();
    std::vector<int> items;
    for (int j = 0; j < M.ground_size(); ++j)
        if (A & (1u << j)) items.push_back(j);
    int ma = static_cast<int>(items.size());
    if (ma == 0) throw std::invalid_argument("restrict_and_relabel: empty item set");
    bool masked = (A & M.avail_mask()) != A;
    if (!masked && M.kind() == Matroid::Kind::uniform)
        return Matroid::uniform(ma, std::min(M.uniform_cap(), ma));
    if (!masked && M.kind() == Matroid::Kind::partition) {
        std::vector<std::vector<int>> parts(M.part_caps().size());
        for (int idx = 0; idx < ma; ++idx) parts[M.part_of()[items[idx]]].push_back(idx);
        std::vector<std::vector<int>> used_parts;
        std::vector<int> used_caps;
        for (size_t p = 0; p < parts.size(); ++p) {
            if (parts[p].empty()) continue;
            used_parts.push_back(parts[p]);
            used_caps.push_back(M.part_caps()[p]);
        }
        return Matroid::partition(ma, used_parts, used_caps);
    }
    if (ma > 16) throw scale_error("restrict_and_relabel: explicit projection too large");
    std::vector<ItemSet> indep;
    for (ItemSet s = 0; s < (1u << ma); ++s) {
        ItemSet embedded = 0;
        for (int idx = 0; idx < ma; ++idx)
            if (s & (1u << idx)) embedded |= 1u << items[idx];
        if (M.is_independent(embedded)) indep.push_back(s);
    }
    return Matroid::explicit_from_independent_sets(ma, indep);
}

UnionSelection greedy_union_basis(const Matroid& M, int k,
                                  const std::vector<UnionElement>& elements) {
    if (k < 1) throw std::invalid_argument("greedy_union_basis: k must be >= 1");
    int m = M.ground_size();
    std::vector<size_t> order;
    order.reserve(elements.size());
    for (size_t i = 0; i < elements.size(); ++i) {
        if (elements[i].item < 0 || elements[i].item >= m)
            throw std::invalid_argument("greedy_union_basis: item out of range");
        if (elements[i].weight > 0) order.push_back(i);
    }
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        if (elements[a].weight != elements[b].weight) return elements[a].weight > elements[b].weight;
        if (elements[a].item != elements[b].item) return elements[a].item < elements[b].item;
        return a < b;  // ascending grid position within an item
    });

    UnionSelection sel;
    sel.counts.assign(m, 0);
    sel.total_weight = 0;
    ItemSet support = 0;
    for (size_t idx : order) {
        int j = elements[idx].item;
        ItemSet supp = support | (1u << j);
        // feasible iff sum of counts over every T within the support stays
        // under k * rank(T); only subsets of the support can bind
        bool ok = true;
        for (ItemSet t = supp; t; t = (t - 1) & supp) {
            if (!(t & (1u << j))) continue;
            int total = 0;
            for (int i2 = 0; i2 < m; ++i2)
                if (t & (1u << i2)) total += sel.counts[i2];
            if (total + 1 > k * M.rank(t)) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        sel.counts[j]++;
        support = supp;
        sel.picked.push_back(idx);
        sel.total_weight += elements[idx].weight;
    }
    std::sort(sel.picked.begin(), sel.picked.end());
    return sel;
}

}  // namespace tarifflab
