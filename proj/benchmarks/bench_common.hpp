#pragma once

#include "tarifflab/dist.hpp"
#include "tarifflab/matroid.hpp"

namespace tarifflab::bench {

inline ValueDist three_atoms() {
    return ValueDist({{Rat(1), make_rat(1, 3)}, {Rat(4), make_rat(1, 3)}, {Rat(9), make_rat(1, 3)}});
}

inline ProductDist two_item_product() {
    return ProductDist({three_atoms(),
                        ValueDist({{Rat(2), make_rat(1, 2)}, {Rat(7), make_rat(1, 2)}})});
}

}  // namespace tarifflab::bench
