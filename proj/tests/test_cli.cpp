#include <cstdlib>
#include <sstream>

#include "rootflag/cli.hpp"
#include "rootflag/identities.hpp"

#include "doctest.h"

using namespace rootflag;
using rootflag::cli::Json;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
    Json json() const { return Json::parse(out); }
};

Outcome run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

long long binom(int n, int k) {
    long long r = 1;
    for (int a = 1; a <= k; ++a) r = r * (n - k + a) / a;
    return r;
}

long long fact(int n) { return n ? n * fact(n - 1) : 1; }

}  // namespace

TEST_CASE("classify") {
    auto r = run({"classify", "--all", "--format", "json"});
    REQUIRE(r.code == 0);
    Json j = r.json();
    CHECK(j["schema"] == 1);
    CHECK(j["summary"]["valid"] == 34);
    CHECK(j["summary"]["invalid"] == 30);
    CHECK(j["summary"]["orbits"] == 15);
    CHECK(j["census"] == Json::parse(R"({"Lex":3,"Revlex":3,"SimionA":4,"SimionB":4,"SimionC":1})"));
    CHECK(j["codes"].size() == 64);

    r = run({"classify", "0b111100", "--format", "csv"});
    CHECK(r.code == 0);
    CHECK(r.out == "code,binary,compact,label,representative,orbit\n60,0b111100,NNXXXX,Revlex,60,REVLEX_XX\n");

    r = run({"classify", "--table4", "--format", "csv"});
    CHECK(r.code == 0);
    std::istringstream lines(r.out);
    std::vector<std::string> rows;
    for (std::string l; std::getline(lines, l);) rows.push_back(l);
    REQUIRE(rows.size() == 16);
    CHECK(rows[1] == "Lex,LEX_NN,3,nest,nest,1");
    CHECK(rows[2] == "Lex,LEX_NX,1,nest,cross,2");
    CHECK(rows[12] == "Simion c,SIMION_C,47,nest,nest,2");
    CHECK(rows[15] == "Revlex,REVLEX_XX,60,cross,cross,1");

    CHECK(run({"classify", "ZZZ"}).code == 2);
}

TEST_CASE("verify exit codes and witnesses") {
    CHECK(run({"verify", "--code", "LEX_NN", "--n", "5"}).code == 0);

    auto r = run({"verify", "--code", "4", "--n", "5", "--format", "json"});
    CHECK(r.code == 1);
    Json j = r.json();
    CHECK(j["pass"] == false);
    Json sa = j["results"][0]["reports"][1];
    CHECK(sa["axiom"] == "SA");
    CHECK(sa["pass"] == false);
    REQUIRE(sa["witnesses"].size() == 1);
    for (const char* key : {"axiom", "I", "J", "k", "matchings"}) CHECK(sa["witnesses"][0].contains(key));

    auto all = run({"verify", "--code", "4", "--n", "5", "--format", "json", "--all-witnesses"}).json();
    CHECK(all["results"][0]["reports"][1]["witnesses"].size() > 1);

    CHECK(run({"verify", "--code", "LEX_NN", "--n", "11"}).code == 2);
    CHECK(run({"verify", "--code", "LEX_NN", "--n", "4", "--cap", "3"}).code == 2);
    CHECK(run({"verify", "--code", "LEX_NN", "--n", "4", "--cap", "3", "--force"}).code == 0);
    CHECK(run({"verify", "--n", "3"}).code == 2);

    setenv("ROOTFLAG_MAX_N", "3", 1);
    CHECK(run({"verify", "--code", "LEX_NN", "--n", "4"}).code == 2);
    CHECK(run({"verify", "--code", "LEX_NN", "--n", "3"}).code == 0);
    unsetenv("ROOTFLAG_MAX_N");
}

TEST_CASE("parallel output keeps input order") {
    auto one = run({"verify", "--all", "--n", "2..4", "--format", "json"});
    auto many = run({"verify", "--all", "--n", "2..4", "--format", "json", "--jobs", "6"});
    CHECK(one.code == 1);  // invalid codes fail
    CHECK(one.out == many.out);
    auto again = run({"verify", "--all", "--n", "2..4", "--format", "json", "--jobs", "3"});
    CHECK(again.out == one.out);
    Json j = one.json();
    REQUIRE(j["results"].size() == 64 * 3);
    CHECK(j["results"][0]["code"] == 0);
    CHECK(j["results"][0]["n"] == 2);
    CHECK(j["results"][2]["n"] == 4);
    CHECK(j["results"][3]["code"] == 1);
}

TEST_CASE("refined lex faces") {
    auto r = run({"faces", "--code", "LEX_NN", "--n", "3", "--refined", "--format", "json"});
    REQUIRE(r.code == 0);
    Json t = r.json()["results"][0]["table"];
    CHECK(t["n"] == 3);
    CHECK(t["selector"] == "all");
    int cells = 0;
    for (const auto& c : t["counts"]) {
        int i = c[0], j = c[1], k = i + j;
        CHECK(c[2].get<long long>() == binom(3 + k, k) * binom(3, k) / (k + 1));
        ++cells;
    }
    CHECK(cells == 10);

    r = run({"faces", "--code", "REVLEX_NN", "--n", "3", "--selector", "facets", "--refined", "--format", "csv"});
    CHECK(r.out == "code,n,i,j,count\n63,3,0,3,4\n63,3,1,2,6\n63,3,2,1,6\n63,3,3,0,4\n");
}

TEST_CASE("facets against the closed forms") {
    auto r = run({"facets", "--code", "SIMION_C", "--n", "6", "--format", "json"});
    CHECK(r.code == 0);
    Json rows = r.json()["results"][0]["rows"];
    const int n = 6;
    REQUIRE(rows.size() == n + 1);
    CHECK(rows[0]["count"] == binom(2 * n, n) / (n + 1));
    for (int i = 1; i <= n; ++i) {
        long long f = (1LL << (i - 1)) * (i + 1) * fact(2 * n - i) / (fact(n - i) * fact(n + 1));
        CHECK(rows[std::size_t(i)]["count"] == f);
        CHECK(rows[std::size_t(i)]["match"] == true);
    }
    CHECK(run({"facets", "--code", "LEX_XX", "--n", "1..5"}).code == 0);
    CHECK(run({"facets", "--code", "REVLEX_XN", "--n", "1..5"}).code == 0);
    // no formula for invalid codes, so nothing can mismatch
    auto inv = run({"facets", "--code", "4", "--n", "3", "--format", "json"}).json();
    CHECK(inv["results"][0]["rows"][0]["formula"].is_null());
}

TEST_CASE("excess signatures for the named orbits") {
    auto r = run({"excess", "--n", "4", "--all-orbits", "--format", "csv"});
    CHECK(r.code == 0);
    std::istringstream lines(r.out);
    std::vector<std::string> rows;
    for (std::string l; std::getline(lines, l);) rows.push_back(l);
    REQUIRE(rows.size() == 16);
    CHECK(rows[0] == "class,orbit,code,n,signature");
    CHECK(rows[1] == "Lex,LEX_NN,3,4,1^6 2^4 3^2 4^4 6^4");
    CHECK(rows[15] == "Revlex,REVLEX_XX,60,4,0^4 2^4 3^2 4^4 5^6");

    Json j = run({"excess", "--code", "LEX_NN", "--format", "json"}).json();
    CHECK(j["results"][0]["n"] == 4);
    CHECK(j["results"][0]["degrees"].size() == 20);
}

TEST_CASE("match") {
    auto r = run({"match", "--rules", "REVLEX_NN", "--tails", "1,3", "--heads", "2,4", "--format", "json"});
    CHECK(r.code == 0);
    Json j = r.json();
    CHECK(j["unique"] == true);
    CHECK(j["support"][0] == j["constructed"]);

    auto bad = run({"match", "--rules", "4", "--tails", "2,3,5", "--heads", "1,4,6", "--format", "json"});
    CHECK(bad.code == 1);
    CHECK(bad.json()["support"].empty());
    CHECK(bad.json()["constructed"].is_null());

    CHECK(run({"match", "--rules", "LEX_NN", "--tails", "1,2", "--heads", "2,3"}).code == 2);
    CHECK(run({"match", "--rules", "LEX_NN", "--tails", "1", "--heads", "2,3"}).code == 2);
    CHECK(run({"match", "--rules", "LEX_NN", "--tails", "1"}).code == 2);
}

TEST_CASE("series dump") {
    auto r = run({"series", "dump", "--name", "simion", "--order", "3"});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("x,y,z,numerator,denominator\n", 0) == 0);
    CHECK(r.out.find("\n1,1,3,3,1\n") != std::string::npos);

    r = run({"series", "dump", "--name", "psi", "--k", "1", "--order", "3", "--format", "csv"});
    CHECK(r.out == "z,numerator,denominator\n0,1,1\n1,1,2\n2,1,6\n3,1,24\n");

    Json j = run({"series", "dump", "--name", "backward-only", "--order", "3", "--format", "json"}).json();
    CHECK(j["schema"] == 1);
    CHECK(j["variables"] == Json::parse(R"(["y","t"])"));

    r = run({"series", "dump", "--name", "faces", "--code", "REVLEX_NN", "--order", "3", "--format", "text"});
    CHECK(r.code == 0);
    CHECK(run({"series", "dump", "--name", "faces", "--order", "3"}).code == 2);
    CHECK(run({"series", "dump", "--name", "nope"}).code == 2);
    CHECK(run({"series", "dump", "--name", "revlex", "--orders", "q=3"}).code == 2);
}

TEST_CASE("series-check ledger") {
    auto r = run({"series-check", "--all", "--zorder", "5", "--format", "json", "--jobs", "4"});
    CHECK(r.code == 0);
    Json j = r.json();
    CHECK(j["schema"] == 1);
    CHECK(j["pass"] == true);
    CHECK(j["ledger"].size() == identity_tags().size());
    for (const auto& [tag, v] : j["ledger"].items()) {
        CAPTURE(tag);
        CHECK(v["pass"] == true);
    }
    CHECK(run({"series-check", "--tag", "nope"}).code == 2);
    CHECK(run({"series-check", "--zorder", "12"}).code == 2);
}

TEST_CASE("usage") {
    CHECK(run({}).code == 2);
    CHECK(run({"--help"}).code == 0);
    CHECK(run({"classify", "--format", "yaml"}).code == 2);
    CHECK(run({"verify", "--code", "LEX_NN", "--n", "5..3"}).code == 2);
    CHECK(cli::parse_n_list("2..4") == std::vector<int>{2, 3, 4});
    CHECK(cli::parse_n_list("1,5") == std::vector<int>{1, 5});
    CHECK(cli::parse_node_set("{3,1}") == NodeSet{1, 3});
    CHECK_THROWS_AS(cli::parse_node_set("1,1"), std::invalid_argument);
    CHECK(cli::parse_orders("x=3,z=7")[Var::z] == 7);
}
