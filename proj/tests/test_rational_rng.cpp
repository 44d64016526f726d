#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tarifflab/rational.hpp"
#include "tarifflab/rng.hpp"

using namespace tarifflab;

TEST_CASE("rational parsing accepts fractions, decimals and integers") {
    CHECK(parse_rat("1/3") == make_rat(1, 3));
    CHECK(parse_rat("-2/6") == make_rat(-1, 3));
    CHECK(parse_rat("0.25") == make_rat(1, 4));
    CHECK(parse_rat("-1.5") == make_rat(-3, 2));
    CHECK(parse_rat("7") == 7);
    CHECK(parse_rat("2/4") == make_rat(1, 2));
    CHECK_THROWS_AS(parse_rat(""), parse_error);
    CHECK_THROWS_AS(parse_rat("1/0"), parse_error);
    CHECK_THROWS_AS(parse_rat("abc"), parse_error);
    CHECK_THROWS_AS(parse_rat("1.2.3"), parse_error);
}

TEST_CASE("rational formatting is canonical") {
    CHECK(rat_str(make_rat(2, 4)) == "1/2");
    CHECK(rat_str(Rat(5)) == "5");
    CHECK(rat_str(make_rat(-3, 9)) == "-1/3");
    CHECK(parse_rat(rat_str(make_rat(22, 7))) == make_rat(22, 7));
}

TEST_CASE("streams are deterministic and substreams are stable") {
    RngStream a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

    RngStream base(7);
    RngStream s1 = base.substream("policy");
    base.next_u64();
    RngStream s2 = base.substream("policy");
    CHECK(s1.next_u64() == s2.next_u64());  // derivation ignores draw position

    CHECK(base.substream(1).next_u64() != base.substream(2).next_u64());
    CHECK(base.substream("x").next_u64() != base.substream("y").next_u64());
}

TEST_CASE("uniform doubles live in the unit interval") {
    RngStream s(99);
    for (int i = 0; i < 1000; ++i) {
        double u = s.next_double();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}
