#include <doctest.h>

#include "natmod/fincat.hpp"

#include <functional>
#include <numeric>

using namespace natmod;

namespace {

FinCat one_object() {
    FinCat c;
    c.objs = {"*"};
    c.homs[{"*", "*"}] = {"id"};
    c.ids["*"] = "id";
    c.comp[{"id", "id"}] = "id";
    c.term = "*";
    c.reindex();
    return c;
}

// a --f--> b with the identities
FinCat arrow() {
    FinCat c;
    c.objs = {"a", "b"};
    c.homs[{"a", "a"}] = {"1a"};
    c.homs[{"b", "b"}] = {"1b"};
    c.homs[{"a", "b"}] = {"f"};
    c.ids = {{"a", "1a"}, {"b", "1b"}};
    c.comp[{"1a", "1a"}] = "1a";
    c.comp[{"1b", "1b"}] = "1b";
    c.comp[{"f", "1a"}] = "f";
    c.comp[{"1b", "f"}] = "f";
    c.term = "b";
    c.reindex();
    return c;
}

// Pushout of finite sets X <- Z -> Y by union-find; the oracle for pullbacks in (Fin/I)^op.
int pushout_size(int nx, int ny, const std::vector<int>& zx, const std::vector<int>& zy) {
    std::vector<int> parent(nx + ny);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int i) { return parent[i] == i ? i : parent[i] = find(parent[i]); };
    for (std::size_t k = 0; k < zx.size(); ++k) parent[find(zx[k])] = find(nx + zy[k]);
    int n = 0;
    for (int i = 0; i < nx + ny; ++i) n += find(i) == i;
    return n;
}

}  // namespace

TEST_CASE("one-object category has an empty report") {
    CHECK(check_category(one_object()).ok());
}

TEST_CASE("broken unit law names the pair") {
    auto c = arrow();
    c.comp[{"f", "1a"}] = "1b";
    auto r = check_category(c);
    CHECK_FALSE(r.ok());
    REQUIRE(r.cites("unit-right"));
    bool named = false;
    for (const auto& v : r.violations)
        if (v.law == "unit-right" && v.detail == "(f, 1a)") named = true;
    CHECK(named);
}

TEST_CASE("missing composite and duplicated morphism are reported") {
    auto c = arrow();
    c.comp.erase({"1b", "f"});
    CHECK(check_category(c).cites("composition-total"));
    auto d = arrow();
    d.homs[{"b", "a"}] = {"f"};
    d.reindex();
    CHECK(check_category(d).cites("hom-disjoint"));
}

TEST_CASE("truncated (Fin/I)^op is a category") {
    FinSliceOp gen(2);
    auto c = materialize(gen, 3);
    CHECK(c.objs.size() == 15);
    CHECK(check_category(c).ok());
    REQUIRE(c.term);
    CHECK(*c.term == "[]");
    // hom([0,1,1],[1,1]) = functions picking a 1-position twice
    CHECK(gen.hom("[0,1,1]", "[1,1]").size() == 4);
    CHECK(gen.hom("[0]", "[1]").empty());
}

TEST_CASE("FinSliceOp composition is precomposition of functions") {
    FinSliceOp gen(1);
    // sigma : [0,0,0] -> [0,0] given by 0->2, 1->0 ; tau : [0,0] -> [0] given by 0->1
    Key sigma = FinSliceOp::morphism({0, 0, 0}, {0, 0}, {2, 0});
    Key tau = FinSliceOp::morphism({0, 0}, {0}, {1});
    CHECK(gen.compose(tau, sigma) == FinSliceOp::morphism({0, 0, 0}, {0}, {0}));
    CHECK(gen.compose(gen.identity("[0,0]"), sigma) == sigma);
}

TEST_CASE("pullback of identities") {
    auto c = arrow();
    auto pb = pullback(c, "1b", "1b");
    REQUIRE(pb);
    CHECK(pb->apex == "b");
    CHECK(pb->left == "1b");
    CHECK(pb->right == "1b");
}

TEST_CASE("pullbacks in a lattice are meets") {
    // diamond 0 <= 1, 0 <= 2, 1,2 <= 3
    std::vector<std::vector<bool>> le = {
        {true, true, true, true}, {false, true, false, true}, {false, false, true, true}, {false, false, false, true}};
    auto c = poset_category(le);
    CHECK(check_category(*c).ok());
    auto meet = [&](int a, int b) {
        // independent: the greatest common lower bound
        int best = -1;
        for (int m = 0; m < 4; ++m)
            if (le[m][a] && le[m][b] && (best < 0 || le[best][m])) best = m;
        return best;
    };
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            auto f = std::to_string(a) + "<=3", g = std::to_string(b) + "<=3";
            auto pb = pullback(*c, f, g);
            REQUIRE(pb);
            CHECK(pb->apex == std::to_string(meet(a, b)));
        }
    // 1 and 2 have no meet below them in the poset without 0
    std::vector<std::vector<bool>> vee = {{true, false, true}, {false, true, true}, {false, false, true}};
    auto v = poset_category(vee);
    CHECK_FALSE(pullback(*v, "0<=2", "1<=2"));
}

TEST_CASE("pullback in truncated (Fin/I)^op is the dual pushout") {
    FinSliceOp gen(2);
    auto c = materialize(gen, 3);
    // f : [0,1] -> [0] picks position 0; g : [0] -> [0] identity. Pushout 2 +_1 1 = 2.
    Key f = FinSliceOp::morphism({0, 1}, {0}, {0});
    Key g = gen.identity("[0]");
    auto pb = pullback(c, f, g);
    REQUIRE(pb);
    CHECK(parse_int_list(pb->apex).size() == static_cast<std::size_t>(pushout_size(2, 1, {0}, {0})));
    // two projections out of [0,0]: pushout of 2 <- 1 -> 2 has 3 elements
    Key h = FinSliceOp::morphism({0, 0}, {0}, {0});
    auto pb2 = pullback(c, h, h);
    REQUIRE(pb2);
    CHECK(parse_int_list(pb2->apex).size() == static_cast<std::size_t>(pushout_size(2, 2, {0}, {0})));
    CHECK(pb2->apex == "[0,0,0]");
}

TEST_CASE("products") {
    auto c = arrow();
    auto p = product(c, "a", "b");
    REQUIRE(p);
    CHECK(p->apex == "a");
    CHECK(p->right == "f");
    CHECK(p->left == "1a");

    FinSliceOp gen(1);
    auto fin = materialize(gen, 3);
    auto q = product(fin, "[0]", "[0,0]");
    REQUIRE(q);
    CHECK(q->apex == "[0,0,0]");  // disjoint union 1 + 2
    auto t = product(fin, "[0,0]", "[]");
    REQUIRE(t);
    CHECK(t->apex == "[0,0]");
    CHECK(t->left == fin.identity("[0,0]"));
    // [0,0] x [0,0] needs 4 elements: outside the fragment
    CHECK_FALSE(product(fin, "[0,0]", "[0,0]"));
}

TEST_CASE("functor checks") {
    auto src = std::make_shared<FinCat>(arrow());
    auto tgt = std::make_shared<FinCat>(one_object());
    FinFunctor F{src, tgt, {{"a", "*"}, {"b", "*"}}, {{"1a", "id"}, {"1b", "id"}, {"f", "id"}}, true};
    CHECK(check_functor(F).ok());
    FinFunctor G{tgt, src, {{"*", "a"}}, {{"id", "1a"}}, true};
    CHECK(check_functor(G).cites("terminal"));
    G.preserves_terminal = false;
    CHECK(check_functor(G).ok());
}

TEST_CASE("tuple keys round-trip") {
    CHECK(split_tup(tup({"a", "(b,c)", "[1,2]"})) == std::vector<Key>{"a", "(b,c)", "[1,2]"});
    CHECK(split_tup("()").empty());
    CHECK_THROWS_AS(split_tup("abc"), MalformedInput);
}
