#include "doctest.h"

#include "natmod/io.hpp"
#include "natmod/models.hpp"

using namespace natmod;

namespace {

// Two contexts 1 and 0, one type "A" over 1 with one term, nothing over 0.
json tiny() {
    return json::parse(R"({
      "objects": ["1", "0"],
      "homs": [["1", "1", ["i1"]], ["0", "1", ["!"]], ["0", "0", ["i0"]]],
      "compose": [["i1", "i1", "i1"], ["i1", "!", "!"], ["!", "i0", "!"], ["i0", "i0", "i0"]],
      "identities": {"1": "i1", "0": "i0"},
      "terminal": "1",
      "ty": {"1": ["A"], "0": ["A"]},
      "tm": {"1": ["a"], "0": ["a"]},
      "typeof": {"1": {"a": "A"}, "0": {"a": "A"}},
      "subst_ty": [["i1", "A", "A"], ["!", "A", "A"], ["i0", "A", "A"]],
      "subst_tm": [["i1", "a", "a"], ["!", "a", "a"], ["i0", "a", "a"]],
      "ext": [{"ctx": "1", "type": "A", "extended": "1", "proj": "i1", "var": "a"},
              {"ctx": "0", "type": "A", "extended": "0", "proj": "i0", "var": "a"}]
    })");
}

}  // namespace

TEST_CASE("a hand-written table is a natural model") {
    auto m = parse_model(tiny());
    CHECK(m->empty() == "1");
    CHECK(m->to_terminal("0") == "!");
    CHECK(check_category(m->cat).ok());
    auto r = check_eat(*m, 3);
    CHECK_MESSAGE(r.ok(), r.text());
    CHECK(model_representability(m, 3).ok());
    CHECK_THROWS_AS(m->subst_ty("!", "B"), Undefined);
}

TEST_CASE("the parser rejects malformed documents") {
    auto with = [](const char* key, json v) {
        auto d = tiny();
        d[key] = v;
        return d;
    };
    CHECK_THROWS_AS(parse_model(with("extra", 1)), MalformedInput);
    CHECK_THROWS_AS(parse_model(with("terminal", "2")), MalformedInput);
    CHECK_THROWS_AS(parse_model(with("objects", json::array({"1", "1", "0"}))), MalformedInput);
    CHECK_THROWS_AS(parse_model(with("typeof", json::object())), MalformedInput);
    CHECK_THROWS_AS(parse_model(with("compose", json::array({json::array({"i1", "nope", "i1"})}))), MalformedInput);
    auto d = tiny();
    d.erase("ext");
    CHECK_THROWS_AS(parse_model(d), MalformedInput);
    d = tiny();
    d["ext"][0]["extra"] = "x";
    CHECK_THROWS_AS(parse_model(d), MalformedInput);
    CHECK_THROWS_AS(parse_model_text("{"), MalformedInput);
}

TEST_CASE("a wrong composite is a check failure, not a parse error") {
    auto d = tiny();
    d["compose"][1][2] = "i1";  // i1 . ! = i1 lands in the wrong hom
    auto m = parse_model(d);
    auto r = check_category(m->cat);
    CHECK_FALSE(r.ok());
    CHECK(r.cites("composition-typed"));
}

TEST_CASE("serialization round trips byte for byte") {
    SUBCASE("hand-written table") {
        auto once = canonical(model_to_json(*parse_model(tiny()), 3));
        auto twice = canonical(model_to_json(*parse_model_text(once), 3));
        CHECK(once == twice);
    }
    SUBCASE("propositions model with its structures") {
        auto p = fam_prop(2);
        Declared d{p->unit(), p->sigma()};
        auto once = canonical(model_to_json(*p, 2, d));
        auto m = parse_model_text(once);
        CHECK(canonical(model_to_json(*m, 2)) == once);
        REQUIRE(m->unit);
        CHECK(check_unit(m, *m->unit, 2).ok());
        auto s = check_sigma(m, m->sigma(), 2);
        CHECK_MESSAGE(s.ok(), s.text());
        // the table agrees with the model it came from
        for (const auto& G : p->objects(2))
            for (const auto& A : p->ty(G)) CHECK(m->ext(G, A).extended == p->ext(G, A).extended);
    }
    SUBCASE("a truncated fragment drops the extensions that leave it") {
        auto t = term_model(1, 2);
        auto doc = model_to_json(*t, 2);
        CHECK(doc["objects"].size() == 3);
        CHECK(doc["ext"].size() == 2);  // [] and [0] extend inside, [0,0] does not
        CHECK(canonical(model_to_json(*parse_model(doc), 2)) == canonical(doc));
    }
}

TEST_CASE("polynomial files") {
    poly::Polynomial F{2, 3, 2, 1, {0, 1, 1}, {0, 0, 1}, {0, 0}};
    auto doc = polynomial_to_json(F);
    CHECK(parse_polynomial(doc) == F);
    CHECK(canonical(polynomial_to_json(parse_polynomial(json::parse(canonical(doc))))) == canonical(doc));
    doc["s"] = json::array({0, 5, 1});
    CHECK_THROWS_AS(parse_polynomial(doc), MalformedInput);
    auto extra = polynomial_to_json(F);
    extra["K"] = 1;
    CHECK_THROWS_AS(parse_polynomial(extra), MalformedInput);

    auto sq = parse_square(json::parse(R"({"A":1,"B":1,"C":1,"D":1,"f":[0],"g":[0],"u":[0],"v":[0]})"));
    CHECK(sq.is_pullback());
    CHECK_THROWS_AS(parse_square(json::parse(R"({"A":1,"B":0,"C":1,"D":1,"f":[],"g":[0],"u":[0],"v":[]})")),
                    MalformedInput);

    auto t = poly::trivial_monad();
    json md{{"p", polynomial_to_json(t.p)}, {"eta", cell_to_json(t.eta)}, {"mu", cell_to_json(t.mu)}};
    auto back = parse_monad(md);
    CHECK(poly::same_cell(back.mu, t.mu));
    CHECK(poly::same_cell(back.eta, t.eta));
}
