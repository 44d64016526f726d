#pragma once

#include <vector>

#include "tarifflab/rational.hpp"

namespace tarifflab {

// Dense exact-rational primal simplex for
//     max c.x  s.t.  A x <= b,  x >= 0,  b >= 0.
// The nonnegative right-hand side makes the slack basis feasible, which is
// all the certificate LPs need. Largest-coefficient pivoting with a switch
// to Bland's rule after a run of degenerate pivots guarantees termination.
enum class LpStatus { optimal, unbounded };

struct LpResult {
    LpStatus status = LpStatus::optimal;
    Rat objective;
    std::vector<Rat> x;
};

LpResult solve_lp_max(const std::vector<Rat>& c, const std::vector<std::vector<Rat>>& A,
                      const std::vector<Rat>& b);

}  // namespace tarifflab
