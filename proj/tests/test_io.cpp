#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "common/testgen.hpp"
#include "tarifflab/io.hpp"

using namespace tarifflab;

TEST_CASE("rational json round trip") {
    CHECK(rat_from_json(nlohmann::json(3)) == 3);
    CHECK(rat_from_json(nlohmann::json("2/6")) == make_rat(1, 3));
    CHECK(rat_from_json(nlohmann::json("0.5")) == make_rat(1, 2));
    CHECK_THROWS_AS(rat_from_json(nlohmann::json(1.5)), parse_error);
    Rat r = make_rat(-7, 3);
    CHECK(rat_from_json(nlohmann::json::parse(rat_to_json(r).dump())) == r);
}

TEST_CASE("distribution json round trip and validation") {
    RngStream s(1);
    for (int trial = 0; trial < 50; ++trial) {
        RngStream t = s.substream(trial);
        ValueDist d = testgen::gen_dist(t, 4);
        CHECK(dist_from_json(nlohmann::json::parse(dist_to_json(d).dump())) == d);
    }
    CHECK_THROWS_AS(dist_from_json(nlohmann::json::parse(R"({"atoms": [[-1, "1"]]})")),
                    parse_error);
    CHECK_THROWS_AS(dist_from_json(nlohmann::json::parse(R"({"atoms": [[1, "1/2"]]})")),
                    parse_error);
    CHECK_THROWS_AS(dist_from_json(nlohmann::json::parse(R"({"noatoms": 1})")), parse_error);
}

TEST_CASE("matroid json round trip") {
    RngStream s(2);
    for (int trial = 0; trial < 50; ++trial) {
        RngStream t = s.substream(trial);
        int m = testgen::gen_int(t, 1, 6);
        Matroid M = testgen::gen_matroid(t, m);
        Matroid back = matroid_from_json(nlohmann::json::parse(matroid_to_json(M).dump()));
        CHECK(back == M);
    }
    CHECK_THROWS_AS(matroid_from_json(nlohmann::json::parse(R"({"variant": "weird"})")),
                    parse_error);
}

TEST_CASE("instance parsing in shared and per-agent forms") {
    auto shared = nlohmann::json::parse(R"({
        "n": 2, "items": 1,
        "distributions": [{"atoms": [[1, "1/2"], [2, "1/2"]]}],
        "matroid": {"variant": "uniform", "m": 1, "k": 1},
        "ex_ante": ["1/4"]
    })");
    Instance inst = instance_from_json(shared);
    CHECK(inst.n == 2);
    CHECK(inst.shared);
    CHECK(inst.dists.size() == 2);
    CHECK(inst.dists[0].items() == inst.dists[1].items());
    REQUIRE(inst.ex_ante.has_value());
    CHECK((*inst.ex_ante)[1][0] == make_rat(1, 4));

    auto per_agent = nlohmann::json::parse(R"({
        "n": 2, "items": 1,
        "distributions": [
            [{"atoms": [[1, "1/2"], [2, "1/2"]]}],
            [{"atoms": [[3, "1"]]}]
        ],
        "matroid": [
            {"variant": "uniform", "m": 1, "k": 1},
            {"variant": "uniform", "m": 1, "k": 1}
        ]
    })");
    Instance inst2 = instance_from_json(per_agent);
    CHECK(!inst2.shared);
    CHECK(inst2.dists[1].item(0) == ValueDist::point_mass(Rat(3)));

    Instance back = instance_from_json(nlohmann::json::parse(instance_to_json(inst2).dump()));
    CHECK(back.dists[1].item(0) == ValueDist::point_mass(Rat(3)));

    auto bad = shared;
    bad["ex_ante"] = nlohmann::json::array({"3/2"});
    CHECK_THROWS_AS(instance_from_json(bad), parse_error);
}

TEST_CASE("mechanism json round trip") {
    TwoPartTariff t{make_rat(3, 2), {Rat(1), Rat(2)}, Matroid::uniform(2, 1)};
    MechanismFile back = mechanism_from_json(nlohmann::json::parse(mechanism_to_json(t).dump()));
    REQUIRE(back.single.has_value());
    CHECK(back.single->entry_fee == make_rat(3, 2));
    CHECK(back.single->prices == t.prices);
    REQUIRE(back.single->demand_limit.has_value());
    CHECK(*back.single->demand_limit == *t.demand_limit);

    SequentialTariff mech;
    mech.order = {1, 0};
    mech.fees = {Rat(1), make_rat(1, 2)};
    mech.prices = {{Rat(2), Rat(0)}, {Rat(3), Rat(4)}};
    mech.limits = {std::nullopt, Matroid::uniform(2, 2)};
    std::vector<Rat> standalone{Rat(2), Rat(1)};
    MechanismFile seq =
        mechanism_from_json(nlohmann::json::parse(mechanism_to_json(mech, standalone).dump()));
    REQUIRE(seq.sequential.has_value());
    CHECK(seq.sequential->order == mech.order);
    CHECK(seq.sequential->fees == mech.fees);
    CHECK(seq.sequential->prices == mech.prices);
    CHECK(!seq.sequential->limits[0].has_value());
    CHECK(*seq.sequential->limits[1] == Matroid::uniform(2, 2));
    REQUIRE(seq.standalone_fees.has_value());
    CHECK(*seq.standalone_fees == standalone);
}

TEST_CASE("certificate serialization carries provenance") {
    BoundCertificate cert = finish_certificate(
        "demo", exact_term("lhs", make_rat(1, 3), Provenance::lp), exact_term("rhs", Rat(1)),
        {mc_term("noise", 0.5, 0.01)}, 0.0);
    Json j = certificate_to_json(cert);
    CHECK(j["holds"] == true);
    CHECK(j["lhs"]["value"] == "1/3");
    CHECK(j["lhs"]["provenance"] == "lp");
    CHECK(j["terms"][0]["provenance"] == "montecarlo");
    CHECK(certificate_to_csv_row(cert).rfind("demo,1,", 0) == 0);
}
