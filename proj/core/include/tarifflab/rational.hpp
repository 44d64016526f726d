#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace tarifflab {

// Exact rational scalar. All probabilities, values, prices and certificate
// terms are carried as Rat; floating point appears only in Monte Carlo
// estimates and in bounds whose constants are transcendental.
using Rat = mpq_class;

inline Rat make_rat(long num, long den = 1) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

// Accepts "a/b", decimal strings ("1.25", "-0.3"), and plain integers.
Rat parse_rat(const std::string& text);

std::string rat_str(const Rat& r);

inline double rat_d(const Rat& r) { return r.get_d(); }

inline Rat rat_min(const Rat& a, const Rat& b) { return a < b ? a : b; }
inline Rat rat_max(const Rat& a, const Rat& b) { return a > b ? a : b; }

Rat rat_sum(const std::vector<Rat>& xs);
Rat rat_dot(const std::vector<Rat>& a, const std::vector<Rat>& b);

// Parse error carrying enough context for CLI diagnostics (exit code 2).
struct parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Instance exceeds a documented enumeration cap (exit code 3).
struct scale_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A documented precondition of an operation does not hold.
struct precondition_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace tarifflab
