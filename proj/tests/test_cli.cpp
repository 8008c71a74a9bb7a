#include "doctest.h"

#include "cli.hpp"
#include "natmod/io.hpp"
#include "natmod/models.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace natmod;
namespace fs = std::filesystem;

namespace {

const std::string kData = NATMOD_TEST_DATA;

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) { return fs::temp_directory_path() / ("natmod_cli_" + name); }

bool has(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

}  // namespace

TEST_CASE("free term model on one basic type") {
    auto r = run({"free", "term-model", "--basic", "1", "--bound", "3"});
    CHECK(r.code == 0);
    CHECK(has(r.out, "[pass] EAT equations (verified up to bound 3)"));
    CHECK(has(r.out, "[pass] representability"));
    CHECK(has(r.out, "result: pass"));
}

TEST_CASE("composing with the identity polynomial finds an isomorphism") {
    auto r = run({"poly", "compose", kData + "/poly_identity.json", kData + "/poly_f.json"});
    CHECK(r.code == 0);
    CHECK(has(r.out, "[pass] left unit F => i . F"));
    CHECK(has(r.out, "isomorphism witness found"));
    auto out = scratch("composite.json");
    r = run({"poly", "compose", kData + "/poly_f.json", kData + "/poly_identity.json", "--out", out.string()});
    CHECK(r.code == 0);
    CHECK(has(r.out, "right unit"));
    auto composite = parse_polynomial(json::parse(slurp(out)));
    CHECK(composite.A == 2);
    CHECK(composite.B == 3);
}

TEST_CASE("a broken composition table fails and cites the law") {
    auto r = run({"check", kData + "/broken_compose.json"});
    CHECK(r.code == 1);
    CHECK(has(r.out, "[FAIL] category laws"));
    CHECK(has(r.out, "[associativity]"));
}

TEST_CASE("check round trips a canonical file") {
    auto out = scratch("roundtrip.json");
    auto r = run({"check", kData + "/fam_prop2.json", "--out", out.string()});
    CHECK(r.code == 0);
    CHECK(has(r.out, "[pass] unit structure"));
    CHECK(has(r.out, "[pass] sigma structure"));
    CHECK(slurp(out) == slurp(kData + "/fam_prop2.json"));
}

TEST_CASE("parse errors exit with 2") {
    CHECK(run({"check", kData + "/missing.json"}).code == 2);
    CHECK(run({"check", kData + "/poly_f.json"}).code == 2);  // not a model
    CHECK(run({"free", "term-model", "--bound", "0"}).code == 2);
    CHECK(run({"free", "nonsense"}).code == 2);
    CHECK(run({"free", "term", "--basic", "1", "--type", "7"}).code == 2);
    CHECK(run({"poly", "extend", kData + "/poly_f.json", "--family", "1,2"}).code == 2);
    CHECK(run({"--format", "xml", "poly", "verify-bc"}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("the bound comes from the flag, then the environment, then the default") {
    ::setenv("NATMOD_BOUND", "2", 1);
    CHECK(has(run({"free", "term-model"}).out, "bound: 2"));
    CHECK(has(run({"free", "term-model", "--bound", "1"}).out, "bound: 1"));
    ::unsetenv("NATMOD_BOUND");
    CHECK(has(run({"free", "term-model"}).out, "bound: 3"));
}

TEST_CASE("machine reports carry one record per check") {
    auto text = run({"free", "unit", "--bound", "2"});
    auto machine = run({"free", "unit", "--bound", "2", "--format", "machine"});
    CHECK(text.code == 0);
    CHECK(machine.code == 0);
    std::istringstream lines(machine.out);
    std::string line;
    std::vector<json> recs;
    while (std::getline(lines, line)) recs.push_back(json::parse(line));
    std::size_t pass_lines = 0;
    for (std::size_t i = 0; i + 6 <= text.out.size(); ++i)
        if (text.out.compare(i, 6, "[pass]") == 0) ++pass_lines;
    REQUIRE(recs.size() == pass_lines + 2);
    CHECK(recs.front()["bound"] == 2);
    CHECK(recs.back()["result"] == "pass");
    for (std::size_t i = 1; i + 1 < recs.size(); ++i) CHECK(recs[i]["status"] == "pass");
}

TEST_CASE("reports are reproducible") {
    for (const char* sub : {"verify-bc", "verify-dist"}) {
        auto a = run({"poly", sub, "--seed", "7", "--format", "machine"});
        auto b = run({"poly", sub, "--seed", "7", "--format", "machine"});
        CHECK(a.code == 0);
        CHECK(a.out == b.out);
    }
    CHECK(run({"free", "type", "--bound", "2"}).out == run({"free", "type", "--bound", "2"}).out);
}

TEST_CASE("pseudomonad data from a file") {
    CHECK(run({"poly", "pseudomonad"}).code == 0);
    CHECK(run({"poly", "pseudomonad", "--trivial"}).code == 0);
    auto d = poly::classifier_monad(*fam_prop(2));
    auto write = [&](const poly::PolyMorphism& mu, const char* name) {
        json doc{{"p", polynomial_to_json(d.p)}, {"eta", cell_to_json(d.eta)}, {"mu", cell_to_json(mu)}};
        auto path = scratch(name);
        std::ofstream(path) << canonical(doc);
        return path.string();
    };
    CHECK(run({"poly", "pseudomonad", write(d.mu, "monad_ok.json")}).code == 0);

    // reversing the positions leaves phi2 off the pullback: not a cell at all
    auto reversed = d.mu;
    std::reverse(reversed.phi0.begin(), reversed.phi0.end());
    CHECK(run({"poly", "pseudomonad", write(reversed, "monad_reversed.json")}).code == 2);

    // every position to the empty proposition: a cell, but not cartesian
    auto collapsed = d.mu;
    collapsed.phi0 = {0, 0, 0};
    collapsed.phi2 = {};
    auto r = run({"poly", "pseudomonad", write(collapsed, "monad_collapsed.json")});
    CHECK(r.code == 1);
    CHECK(has(r.out, "[mu] not cartesian"));
}

TEST_CASE("extension sizes") {
    auto r = run({"poly", "extend", kData + "/poly_f.json", "--family", "3"});
    CHECK(r.code == 0);
    // one position with one direction and one with two: 3 + 9
    CHECK(has(r.out, "P_F(X) = [12]"));
}
