#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <string>

#include "tarifflab/io.hpp"

using namespace tarifflab;

namespace {

const std::string cli = TARIFFLAB_CLI_PATH;
const std::string data = TARIFFLAB_DATA_DIR;

int run(const std::string& args) {
    std::string cmd = cli + " " + args + " >/dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string tmp_path(const std::string& name) {
    return std::string("/tmp/tarifflab_test_") + name;
}

}  // namespace

TEST_CASE("certify passes on the bundled instances") {
    CHECK(run("certify --instance " + data + "/instances/single_small.json") == 0);
    CHECK(run("certify --instance " + data + "/instances/additive_small.json") == 0);
    CHECK(run("certify --instance " + data + "/instances/multi3.json --trials 2000 --seed 5") == 0);
}

TEST_CASE("a corrupted expectation flips the exit code") {
    CHECK(run("certify --instance " + data +
              "/instances/single_small.json --rhs-scale 1/1000000") == 1);
}

TEST_CASE("usage and parse errors exit with 2") {
    CHECK(run("certify") == 2);
    CHECK(run("nonsense") == 2);
    CHECK(run("certify --instance /nonexistent.json") == 2);
    CHECK(run("evaluate --mechanism /nonexistent.json --instance " + data +
              "/instances/single_small.json") == 2);
    // missing seed for a stochastic command
    CHECK(run("synthesize --instance " + data + "/instances/symmetric_small.json") == 2);
    // zero-trial Monte Carlo evaluation
    std::string mech = tmp_path("mech_usage.json");
    CHECK(run("synthesize --instance " + data + "/instances/symmetric_small.json --seed 3 --out " +
              mech) == 0);
    CHECK(run("evaluate --mechanism " + mech + " --instance " + data +
              "/instances/symmetric_small.json --trials 0 --seed 1") == 2);
}

TEST_CASE("synthesize emits a mechanism the evaluator accepts") {
    std::string mech = tmp_path("mech.json");
    std::string report = tmp_path("synth_report.json");
    CHECK(run("synthesize --instance " + data + "/instances/symmetric_small.json --seed 11 " +
              "--trials 512 --out " + mech + " --report " + report) == 0);
    MechanismFile mf = mechanism_from_file(mech);
    REQUIRE(mf.sequential.has_value());
    CHECK(mf.sequential->num_agents() == 2);
    CHECK(run("evaluate --mechanism " + mech + " --instance " + data +
              "/instances/symmetric_small.json --exact") == 0);
    CHECK(run("evaluate --mechanism " + mech + " --instance " + data +
              "/instances/symmetric_small.json --trials 200 --seed 9 --format csv") == 0);
}

TEST_CASE("fixed seeds reproduce reports byte for byte") {
    std::string r1 = tmp_path("rep1.json");
    std::string r2 = tmp_path("rep2.json");
    std::string base = "certify --instance " + data +
                       "/instances/multi3.json --trials 1500 --seed 33 --out ";
    REQUIRE(run(base + r1) == 0);
    REQUIRE(run(base + r2) == 0);
    CHECK(read_file(r1) == read_file(r2));

    std::string m1 = tmp_path("m1.json"), m2 = tmp_path("m2.json");
    std::string s1 = tmp_path("s1.json"), s2 = tmp_path("s2.json");
    std::string synth = "synthesize --instance " + data +
                        "/instances/symmetric_small.json --seed 77 --trials 256 ";
    REQUIRE(run(synth + "--out " + m1 + " --report " + s1) == 0);
    REQUIRE(run(synth + "--out " + m2 + " --report " + s2) == 0);
    CHECK(read_file(m1) == read_file(m2));
    CHECK(read_file(s1) == read_file(s2));

    std::string e1 = tmp_path("e1.csv"), e2 = tmp_path("e2.csv");
    std::string eval = "evaluate --mechanism " + m1 + " --instance " + data +
                       "/instances/symmetric_small.json --trials 400 --seed 123 --format csv --out ";
    REQUIRE(run(eval + e1) == 0);
    REQUIRE(run(eval + e2) == 0);
    CHECK(read_file(e1) == read_file(e2));
}

TEST_CASE("stitched mechanisms report the half margin") {
    std::string mech = tmp_path("mech_margin.json");
    std::string out = tmp_path("margin.json");
    REQUIRE(run("synthesize --instance " + data + "/instances/symmetric_small.json --seed 4 " +
                "--trials 256 --out " + mech) == 0);
    REQUIRE(run("evaluate --mechanism " + mech + " --instance " + data +
                "/instances/symmetric_small.json --exact --out " + out) == 0);
    auto j = nlohmann::json::parse(read_file(out));
    CHECK(j.contains("standalone_sum"));
    CHECK(j.contains("half_margin"));
}
