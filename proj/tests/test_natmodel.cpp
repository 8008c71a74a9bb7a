#include "doctest.h"

#include "natmod/freemodel.hpp"
#include "natmod/models.hpp"
#include "natmod/natmodel.hpp"

#include <algorithm>
#include <numeric>

using namespace natmod;

namespace {

// fam_prop whose substitution forgets sigma on the predicate [1,0]
class ForgetfulSubst : public ModelView {
public:
    using ModelView::ModelView;
    Key subst_ty(const Key& s, const Key& A) const override {
        if (A == "[1,0]" && s != identity(cod(s))) {
            auto n = std::stoi(dom(s));
            return int_list(std::vector<int>(n, 1));
        }
        return inner_->subst_ty(s, A);
    }
    std::string name() const override { return "forgetful"; }
};

// Stable sort of a word, with the permutation taking positions to ranks.
struct Sorted {
    std::vector<int> word, rank, order;
};

Sorted sort_word(const std::vector<int>& u) {
    Sorted s;
    s.order.resize(u.size());
    std::iota(s.order.begin(), s.order.end(), 0);
    std::stable_sort(s.order.begin(), s.order.end(), [&](int a, int b) { return u[a] < u[b]; });
    s.rank.resize(u.size());
    for (std::size_t r = 0; r < u.size(); ++r) {
        s.rank[s.order[r]] = static_cast<int>(r);
        s.word.push_back(u[s.order[r]]);
    }
    return s;
}

// Contexts go to their sorted rearrangement: an equivalence that does not
// preserve extension on the nose.
NMorphism sorting_morphism(std::shared_ptr<const TermModel> m) {
    NMorphism F;
    F.src = F.tgt = m;
    F.name = "sort";
    F.obj = [](const Key& u) { return int_list(sort_word(parse_int_list(u)).word); };
    F.mor = [m](const Key& s) {
        auto v = sort_word(parse_int_list(m->dom(s))), u = sort_word(parse_int_list(m->cod(s)));
        auto fn = FinSliceOp::function(s);
        std::vector<int> out(fn.size());
        for (std::size_t r = 0; r < fn.size(); ++r) out[r] = v.rank[fn[u.order[r]]];
        return FinSliceOp::morphism(v.word, u.word, out);
    };
    F.ty = [](const Key&, const Key& A) { return A; };
    F.tm = [](const Key& u, const Key& a) {
        return std::to_string(sort_word(parse_int_list(u)).rank.at(std::stoi(a)));
    };
    return F;
}

}  // namespace

TEST_CASE("term model passes the essentially algebraic checker") {
    for (int n : {0, 1, 2}) {
        auto m = term_model(n, 3);
        auto r = check_eat(*m, 3);
        CHECK_MESSAGE(r.ok(), r.text());
        CHECK(r.bound == 3);
        auto sq = check_ext_squares(m, 3);
        CHECK_MESSAGE(sq.ok(), sq.text());
    }
}

TEST_CASE("term model extension data") {
    auto m = term_model(2, 3);
    auto e = m->ext("[1,0]", "1");
    CHECK(e.extended == "[1,0,1]");
    CHECK(e.proj == "([1,0,1],[1,0],[0,1])");
    CHECK(e.var == "2");
    CHECK(m->type_of("[1,0,1]", "2") == "1");
    CHECK(m->ty("[]") == std::vector<Key>{"0", "1"});
    CHECK(m->tm("[]").empty());
}

TEST_CASE("canonical pullbacks in the term model") {
    auto m = term_model(2, 3);
    // s : [0,1,1] -> [1,0] picks positions 2 and 0; s.1 appends the fresh position
    Key s = FinSliceOp::morphism({0, 1, 1}, {1, 0}, {2, 0});
    CHECK(canonical_pullback(*m, s, "1") == FinSliceOp::morphism({0, 1, 1, 1}, {1, 0, 1}, {2, 0, 3}));
    for (const auto& G : m->objects(2))
        for (const auto& A : m->ty(G)) CHECK(canonical_pullback(*m, m->identity(G), A) == m->identity(m->ext(G, A).extended));
}

TEST_CASE("canonical pullbacks paste") {
    for (ModelPtr m : {ModelPtr(term_model(2, 2)), ModelPtr(fam_prop(2))}) {
        auto objs = m->objects(2);
        int checked = 0;
        for (const auto& X : objs)
            for (const auto& Y : objs)
                for (const auto& t : m->hom(X, Y))
                    for (const auto& Z : objs)
                        for (const auto& s : m->hom(Y, Z))
                            for (const auto& A : m->ty(Z)) {
                                Key lhs = canonical_pullback(*m, m->compose(s, t), A);
                                Key rhs = m->compose(canonical_pullback(*m, s, A),
                                                     canonical_pullback(*m, t, m->subst_ty(s, A)));
                                CHECK(lhs == rhs);
                                ++checked;
                            }
        CHECK(checked > 0);
    }
}

TEST_CASE("pairing laws") {
    auto m = fam_prop(2);
    for (const auto& G : m->objects(2))
        for (const auto& A : m->ty(G)) {
            auto e = m->ext(G, A);
            for (const auto& D : m->objects(2))
                for (const auto& s : m->hom(D, e.extended))
                    CHECK(indsub(*m, m->compose(e.proj, s), m->subst_tm(s, e.var), A) == s);
            for (const auto& a : m->tm(G)) {
                if (m->type_of(G, a) != A) continue;
                Key sa = section(*m, G, A, a);
                CHECK(m->compose(e.proj, sa) == m->identity(G));
                CHECK(m->subst_tm(sa, e.var) == a);
            }
        }
}

TEST_CASE("a substitution that forgets sigma fails equation (xii)") {
    auto bad = std::make_shared<ForgetfulSubst>(fam_prop(2));
    auto r = check_eat(*bad, 2);
    CHECK_FALSE(r.ok());
    CHECK(r.cites("(xii)"));
}

TEST_CASE("checker verdict agrees with the presheaf oracle") {
    auto good = fam_prop(2);
    CHECK(check_eat(*good, 2).ok());
    CHECK(check_ext_squares(good, 2).ok());
    auto bad = std::make_shared<ForgetfulSubst>(fam_prop(2));
    CHECK_FALSE(check_eat(*bad, 2).ok());
    CHECK_FALSE(check_ext_squares(bad, 2).ok());
}

TEST_CASE("propositions model carries unit, sums and products") {
    auto m = fam_prop(3);
    auto r = check_eat(*m, 3);
    CHECK_MESSAGE(r.ok(), r.text());
    auto u = check_unit(m, m->unit(), 3);
    CHECK_MESSAGE(u.ok(), u.text());
    auto s = check_sigma(m, m->sigma(), 2);
    CHECK_MESSAGE(s.ok(), s.text());
    auto p = check_pi(m, m->pi(), 2);
    CHECK_MESSAGE(p.ok(), p.text());
    CHECK_THROWS_AS(check_unit(m, {"[1,1]", "[1]"}, 2), MalformedInput);
    CHECK_FALSE(check_unit(m, {"[0]", "[1]"}, 2).ok());
}

TEST_CASE("a pairing that drops its second component in one fibre fails (ix)") {
    auto base = term_model(1, 2);
    auto e = extend_by_sigma(base, 2);
    auto good = e->sigma();
    CHECK(check_sigma(e, good, 2).ok());
    SigmaStructure bad = good;
    const Key X = "([0,0])";
    bad.pair = [good, X](const Key& c, const Key& A, const Key& B, const Key& a, const Key& b) {
        if (c == X && A == tree_leaf("0") && B == tree_leaf("0")) return good.pair(c, A, B, a, a);
        return good.pair(c, A, B, a, b);
    };
    auto r = check_sigma(e, bad, 2);
    CHECK_FALSE(r.ok());
    CHECK(r.cites("(ix)"));
}

TEST_CASE("morphism checks") {
    auto m = term_model(2, 2);
    auto id = check_morphism(identity_morphism(m), true, 2);
    CHECK_MESSAGE(id.ok(), id.report.text());

    auto F = sorting_morphism(m);
    auto strict = check_morphism(F, true, 2);
    auto weak = check_morphism(F, false, 2);
    CHECK(strict.base.ok());
    CHECK_FALSE(strict.ok());
    CHECK(strict.strict.cites("strict"));
    CHECK_MESSAGE(weak.ok(), weak.report.text());
    CHECK(weak.pullbacks.ok());
}

TEST_CASE("comparison maps are identities for strict morphisms") {
    auto m = term_model(2, 2);
    auto F = identity_morphism(m);
    for (const auto& G : m->objects(2))
        for (const auto& A : m->ty(G)) CHECK(comparison(F, G, A) == m->identity(m->ext(G, A).extended));
}

TEST_CASE("sum preservation") {
    auto m = fam_prop(2);
    auto id = identity_morphism(m);
    CHECK(check_sigma_morphism(id, m->sigma(), m->sigma(), 2).ok());
    auto F = id;
    F.ty = [](const Key& G, const Key& A) {
        if (G == "1" && A == "[0]") return Key("[1]");
        return A;
    };
    SigmaStructure s = m->sigma();
    SigmaStructure t = s;
    t.sigma = [s](const Key& G, const Key& A, const Key& B) {
        Key out = s.sigma(G, A, B);
        return G == "1" && out == "[0]" ? Key("[1]") : out;
    };
    CHECK_FALSE(check_sigma_morphism(F, s, s, 2).ok());
}

TEST_CASE("classified morphisms") {
    auto m = term_model(1, 2);
    auto r = classified_morphisms(*m, 2);
    CHECK_MESSAGE(r.report.ok(), r.report.text());
    for (const auto& G : m->objects(1))
        for (const auto& A : m->ty(G)) {
            auto c = classify(*m, m->ext(G, A).proj);
            REQUIRE(c);
            CHECK(c->classified);
        }
    // no type with invertible projection, so identities are not classified
    for (const auto& G : m->objects(2)) CHECK_FALSE(classify(*m, m->identity(G)));

    auto p = fam_prop(2);
    for (const auto& G : p->objects(2)) {
        auto c = classify(*p, p->identity(G));
        REQUIRE(c);
        CHECK(c->type == int_list(std::vector<int>(std::stoi(G), 1)));
    }
    CHECK(classified_morphisms(*p, 2).report.ok());
}
