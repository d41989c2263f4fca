#include <doctest.h>

#include <sstream>
#include <string>
#include <vector>

#include "blackjack/cli.hpp"
#include "blackjack/json_io.hpp"

using namespace blackjack;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "blackjack");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> v;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) v.push_back(line);
    return v;
}

}  // namespace

TEST_CASE("dealer-table layout") {
    const Run r = run({"dealer-table", "--decks", "1", "--s17"});
    REQUIRE(r.code == kExitOk);
    const auto rows = lines(r.out);
    REQUIRE(rows.size() == 11);
    CHECK(rows[0] == "upcard,17,18,19,20,21,bust");
    CHECK(rows[1].rfind("2,", 0) == 0);
    CHECK(rows[5] == "6,0.16694,0.10645,0.10719,0.10070,0.09787,0.42082");
    CHECK(rows[10] == "1,0.18378,0.19089,0.18867,0.19169,0.07513,0.16981");  // cut, never rounded
    CHECK(run({"dealer-table", "--decks", "1", "--s17"}).out == r.out);  // byte-stable

    const Run p = run({"dealer-table", "--decks", "1", "--measure", "P"});
    CHECK(lines(p.out)[0] == "upcard,17,18,19,20,21,natural,bust");
    CHECK(run({"dealer-table", "--s17", "--h17"}).code == kExitUsage);
}

TEST_CASE("ev-table rows") {
    const Run r = run({"ev-table", "--decks", "2", "--up", "6", "--rules", "111"});
    REQUIRE(r.code == kExitOk);
    const auto rows = lines(r.out);
    CHECK(rows[0] == "hand,stand,hit,double,split,action");
    CHECK(rows.size() == 56);
    bool saw_natural = false;
    bool saw_ace_seven = false;
    for (const auto& row : rows) {
        if (row.rfind("1+10,", 0) == 0) {
            CHECK(row.rfind("1+10,1.500000,", 0) == 0);
            CHECK(row.substr(row.size() - 6) == ",stand");
            saw_natural = true;
        }
        if (row.rfind("1+7,", 0) == 0) {
            CHECK(row == "1+7,0.273909,0.192289,0.384578,,double");  // cut, never rounded
            saw_ace_seven = true;
        }
    }
    CHECK(saw_natural);
    CHECK(saw_ace_seven);
}

TEST_CASE("expected-win prints a percentage") {
    const Run r = run({"expected-win", "--decks", "inf", "--rules", "111"});
    REQUIRE(r.code == kExitOk);
    CHECK(r.out == "-0.4509\n");
}

TEST_CASE("advise subcommand") {
    const Run r = run({"advise", "--deck", R"({"mode":"finite","decks":1})", "--rules", "111", "--up", "6",
                       "--cards", "9,7"});
    REQUIRE(r.code == kExitOk);
    const Json j = Json::parse(r.out);
    CHECK(j["best"] == "stand");
    CHECK(j.contains("stand"));

    const Run nat = run({"advise", "--deck", R"({"mode":"infinite"})", "--up", "6", "--cards", "10,1"});
    REQUIRE(nat.code == kExitOk);
    CHECK(Json::parse(nat.out)["payout"] == 1.5);

    const Run unknown = run({"advise", "--deck", R"({"mode":"finite","decks":1,"extra":2})", "--up", "6",
                             "--cards", "9,7"});
    CHECK(unknown.code == kExitUsage);
    CHECK(unknown.err.find("deck.extra") != std::string::npos);

    const Run empty = run({"advise", "--deck", R"({"mode":"finite","counts":[0,0,0,0,0,0,0,0,0,0]})", "--up", "6",
                           "--cards", "9,7"});
    CHECK(empty.code == kExitEngineError);

    CHECK(run({"advise", "--deck", R"({"mode":"infinite"})", "--up", "6", "--cards", "9,x"}).code == kExitUsage);
}

TEST_CASE("removal-effects and estimate") {
    const Run r = run({"removal-effects", "--decks", "1", "--rules", "111", "--depth", "2"});
    REQUIRE(r.code == kExitOk);
    const auto rows = lines(r.out);
    REQUIRE(rows.size() == 11);
    CHECK(rows[0] == "card,r");
    CHECK(rows[1].rfind("1,-", 0) == 0);

    const Run json = run({"removal-effects", "--decks", "1", "--depth", "2", "--json"});
    REQUIRE(json.code == kExitOk);
    CHECK(Json::parse(json.out)["columns"].contains("1"));

    const Run est = run({"estimate", "--decks", "1", "--depth", "2", "--removed", "5,5", "--exact"});
    REQUIRE(est.code == kExitOk);
    const auto est_rows = lines(est.out);
    REQUIRE(est_rows.size() == 4);
    CHECK(est_rows[0] == "quantity,value");
    CHECK(est_rows[1].rfind("base,", 0) == 0);
    CHECK(est_rows[2].rfind("estimate,", 0) == 0);
    CHECK(est_rows[3].rfind("exact,", 0) == 0);

    CHECK(run({"estimate", "--decks", "1", "--removed", "1,1,1,1,1"}).code == kExitEngineError);
    CHECK(run({"estimate", "--decks", "inf", "--removed", "5"}).code == kExitUsage);
    CHECK(run({"estimate", "--decks", "1"}).code == kExitUsage);
}

TEST_CASE("simulate subcommands emit reports") {
    const Run d = run({"simulate", "dealer", "--decks", "1", "--up", "6", "--n", "1000", "--seed", "4"});
    REQUIRE(d.code == kExitOk);
    const Json jd = Json::parse(d.out);
    CHECK(jd["n"] == 1000);
    CHECK(jd["seed"] == 4);
    CHECK(run({"simulate", "dealer", "--decks", "1", "--up", "6", "--n", "1000", "--seed", "4"}).out == d.out);

    const Run r = run({"simulate", "round", "--decks", "1", "--rules", "111", "--n", "200", "--seed", "4"});
    REQUIRE(r.code == kExitOk);
    CHECK(Json::parse(r.out).contains("stderr"));
    CHECK(run({"simulate"}).code == kExitUsage);
}

TEST_CASE("usage errors") {
    CHECK(run({}).code == kExitUsage);
    CHECK(run({"bogus"}).code == kExitUsage);
    CHECK(run({"expected-win", "--decks", "zero"}).code == kExitUsage);
    CHECK(run({"expected-win", "--rules", "12"}).code == kExitUsage);
    CHECK(run({"--help"}).code == kExitOk);
}
