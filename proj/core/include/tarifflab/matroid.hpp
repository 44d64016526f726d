#pragma once

#include <cstdint>
#include <vector>

#include "tarifflab/rational.hpp"

namespace tarifflab {

// Items are bit positions in a 32-bit mask; explicit rank tables cap the
// ground set at 16 items.
using ItemSet = uint32_t;

inline int set_size(ItemSet s) { return __builtin_popcount(s); }
inline ItemSet full_set(int m) { return m >= 32 ? ~0u : ((1u << m) - 1); }

// Matroid over items [0, m). Uniform and partition variants carry closed-form
// ranks; the explicit variant carries a validated rank table. Every matroid
// also carries an availability mask: queries behave as the restriction to the
// masked items (rank(S) = base_rank(S & mask)).
class Matroid {
public:
    enum class Kind { uniform, partition, explicit_table };

    static Matroid uniform(int m, int k);
    static Matroid partition(int m, const std::vector<std::vector<int>>& parts,
                             const std::vector<int>& caps);
    static Matroid explicit_from_independent_sets(int m, const std::vector<ItemSet>& indep);

    Kind kind() const { return kind_; }
    int ground_size() const { return m_; }
    ItemSet avail_mask() const { return avail_; }
    ItemSet ground_mask() const { return full_set(m_); }

    int rank(ItemSet s) const;
    bool is_independent(ItemSet s) const;

    // F restricted to A: independence agrees with F intersected with 2^A.
    Matroid restricted(ItemSet avail) const;

    // Rank of S in the k-fold union of this matroid with itself.
    int union_rank(int k, ItemSet s) const;

    // True when every independent set here is independent in `coarser`.
    bool refines(const Matroid& coarser) const;

    // Accessors for serialization.
    int uniform_cap() const { return uniform_k_; }
    const std::vector<int>& part_of() const { return part_of_; }
    const std::vector<int>& part_caps() const { return caps_; }
    std::vector<ItemSet> maximal_independent_sets() const;

    bool operator==(const Matroid& other) const;

private:
    Matroid() = default;
    int base_rank(ItemSet s) const;
    void validate_explicit() const;

    Kind kind_ = Kind::uniform;
    int m_ = 0;
    ItemSet avail_ = 0;
    int uniform_k_ = 0;
    std::vector<int> part_of_;  // item -> part id
    std::vector<int> caps_;     // part id -> capacity
    std::vector<uint8_t> rank_table_;  // explicit variant, size 2^m
};

// Greedy maximum weight basis over positive-weight items, descending weight
// with ascending item index as the tie order. Items with weight exactly zero
// are never selected. restrict_to intersects the matroid's own mask.
ItemSet max_weight_basis(const Matroid& M, const std::vector<Rat>& weights,
                         ItemSet restrict_to);

// Greedy over lexicographic (primary, secondary) weights; elements with
// (primary, secondary) lex-below (0, 0) are skipped. Used by the
// seller-favorable demand response where the secondary key is the payment.
ItemSet max_weight_basis_lex(const Matroid& M, const std::vector<Rat>& primary,
                             const std::vector<Rat>& secondary, ItemSet restrict_to);

// Exact membership of q in b * P_F.
bool in_scaled_polytope(const Matroid& M, const std::vector<Rat>& q, const Rat& b);

// Matroid over the items of A only, relabeled to [0, |A|) in ascending item
// order. Queries agree with the restriction of M to A.
Matroid restrict_and_relabel(const Matroid& M, ItemSet A);

// One grid element of an item offered to the k-fold union greedy. Elements of
// the same item are distinguished by their position in the input sequence.
struct UnionElement {
    int item;
    Rat weight;
};

struct UnionSelection {
    std::vector<int> counts;                  // selected elements per item
    std::vector<size_t> picked;               // indices into the input sequence
    Rat total_weight;
};

// Max-weight selection of elements subject to k-fold-union independence of
// the item multiset: a selection is feasible iff for every item set T the
// number of selected elements of items in T is at most k * rank(T).
// Tie order: weight desc, item asc, input position asc. Elements with
// non-positive weight are never selected.
UnionSelection greedy_union_basis(const Matroid& M, int k,
                                  const std::vector<UnionElement>& elements);

}  // namespace tarifflab
