#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tarifflab/lp.hpp"

using namespace tarifflab;

namespace {

std::vector<Rat> rats(std::initializer_list<long> xs) {
    std::vector<Rat> out;
    for (long x : xs) out.push_back(Rat(x));
    return out;
}

}  // namespace

TEST_CASE("small textbook maximum") {
    // max 3x + 5y  s.t. x <= 4, 2y <= 12, 3x + 2y <= 18
    LpResult r = solve_lp_max(rats({3, 5}),
                              {rats({1, 0}), rats({0, 2}), rats({3, 2})},
                              rats({4, 12, 18}));
    REQUIRE(r.status == LpStatus::optimal);
    CHECK(r.objective == 36);
    CHECK(r.x == rats({2, 6}));
}

TEST_CASE("degenerate rows are handled") {
    // x <= 0 forces x out; optimum on y alone
    LpResult r = solve_lp_max(rats({1, 1}), {rats({1, 0}), rats({1, 1})}, rats({0, 5}));
    REQUIRE(r.status == LpStatus::optimal);
    CHECK(r.objective == 5);
    CHECK(r.x[0] == 0);
    CHECK(r.x[1] == 5);
}

TEST_CASE("unbounded detection") {
    LpResult r = solve_lp_max(rats({1}), {std::vector<Rat>{Rat(-1)}}, rats({3}));
    CHECK(r.status == LpStatus::unbounded);
}

TEST_CASE("zero objective returns the slack basis") {
    LpResult r = solve_lp_max(rats({0, 0}), {rats({1, 1})}, rats({2}));
    REQUIRE(r.status == LpStatus::optimal);
    CHECK(r.objective == 0);
}

TEST_CASE("exact rational pivots") {
    // optimum with fractional coordinates: max x + y st 3x+y<=1, x+3y<=1
    LpResult r = solve_lp_max(rats({1, 1}), {rats({3, 1}), rats({1, 3})},
                              rats({1, 1}));
    REQUIRE(r.status == LpStatus::optimal);
    CHECK(r.objective == make_rat(1, 2));
    CHECK(r.x == std::vector<Rat>{make_rat(1, 4), make_rat(1, 4)});
}

TEST_CASE("rhs must be nonnegative") {
    CHECK_THROWS_AS(solve_lp_max(rats({1}), {rats({1})}, rats({-1})), std::invalid_argument);
}
