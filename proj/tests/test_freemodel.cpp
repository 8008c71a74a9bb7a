#include "doctest.h"

#include "natmod/freemodel.hpp"
#include "natmod/models.hpp"
#include "natmod/natmodel.hpp"

using namespace natmod;

namespace {

void require_model(ModelPtr m, int bound) {
    auto r = check_eat(*m, bound);
    CHECK_MESSAGE(r.ok(), r.text());
}

void require_strict(const NMorphism& F, int bound) {
    auto r = check_morphism(F, true, bound);
    CHECK_MESSAGE(r.ok(), r.report.text());
}

Pins with_empty(Pins p, const Key& ctx, char sort, const Key& k, const Key& v) {
    p.fixed[{ctx, sort, k}] = v;
    return p;
}

}  // namespace

TEST_CASE("type trees") {
    auto m = term_model(2, 3);
    Key T = tree_node(tree_leaf("0"), tree_node(tree_leaf("1"), tree_leaf("0")));
    CHECK(leaf_count(T) == 3);
    CHECK(is_tree_type(*m, "[]", T));
    CHECK_FALSE(is_tree_type(*m, "[]", tree_leaf("2")));
    auto r = tree_repr(*m, "[1]", T);
    CHECK(r.extended == "[1,0,1,0]");
    CHECK(r.proj == FinSliceOp::morphism({1, 0, 1, 0}, {1}, {0}));
    CHECK(tree_type_of(*m, "[1,0,1,0]", r.var) == tree_subst(*m, r.proj, T));
    // the representing triple is universal: <p, q> = id
    CHECK(tree_indsub(*m, r.proj, r.var, T) == m->identity(r.extended));

    // substitution of trees is functorial
    auto objs = m->objects(2);
    for (const auto& X : objs)
        for (const auto& Y : objs)
            for (const auto& t : m->hom(X, Y))
                for (const auto& Z : objs)
                    for (const auto& s : m->hom(Y, Z))
                        for (const auto& U : type_trees(*m, Z, 3))
                            CHECK(tree_subst(*m, m->compose(s, t), U) == tree_subst(*m, t, tree_subst(*m, s, U)));
}

TEST_CASE("term trees are the sections of their type") {
    auto m = term_model(1, 3);
    for (const auto& G : {Key("[0]"), Key("[0,0]")})
        for (const auto& T : type_trees(*m, G, 2)) {
            auto terms = term_trees(*m, G, T);
            // both components of a pair live over G, so a tree has |G|^leaves terms
            std::size_t g = G.size() == 3 ? 1 : 2;
            std::size_t n = is_leaf(T) ? g : g * g;
            CHECK(terms.size() == n);
            for (const auto& t : terms) {
                CHECK(tree_type_of(*m, G, t) == T);
                Key sec = tree_section(*m, G, T, t);
                auto r = tree_repr(*m, G, T);
                CHECK(m->compose(r.proj, sec) == m->identity(G));
                CHECK(tree_subst_tm(*m, sec, r.var) == t);
            }
        }
}

TEST_CASE("swap isomorphisms") {
    auto m = fam_prop(3);
    for (const auto& G : m->objects(2))
        for (const auto& O : m->ty(G))
            for (const auto& A : m->ty(G)) {
                auto s = swap_iso(*m, G, O, A);
                CHECK(m->dom(s.mor) == s.source);
                CHECK(m->cod(s.mor) == s.target);
                CHECK(inverse(*m, s.mor));
            }
}

TEST_CASE("initial morphisms out of the term model") {
    auto tm = term_model(2, 3);
    SUBCASE("into itself it is the identity") {
        auto F = initial_morphism(tm, tm, {"0", "1"});
        require_strict(F, 3);
        CHECK(tabulate(F, 3) == tabulate(identity_morphism(tm), 3));
        // without pins every choice of images for the two basic types extends
        CHECK(count_strict_morphisms(tm, tm, 3, {}, 10).count == 4);
        auto u = verify_unique(F, 3, with_empty(with_empty({}, "[]", 'T', "0", "0"), "[]", 'T', "1", "1"));
        CHECK_MESSAGE(u.report.ok(), u.report.text());
        CHECK(u.count == 1);
    }
    SUBCASE("into propositions") {
        auto D = fam_prop(3);
        auto F = initial_morphism(tm, D, {"[1]", "[0]"});
        require_strict(F, 2);
        CHECK(F.obj("[0,0]") == "1");
        CHECK(F.obj("[0,1]") == "0");
        auto u = verify_unique(F, 3, with_empty(with_empty({}, "[]", 'T', "0", "[1]"), "[]", 'T', "1", "[0]"));
        CHECK_MESSAGE(u.report.ok(), u.report.text());
        CHECK(u.count == 1);
    }
    SUBCASE("into a formal extension") {
        auto D = extend_by_type(term_model(0, 3));
        auto F = initial_morphism(tm, D, {"X", "X"});
        require_strict(F, 2);
        auto u = verify_unique(F, 3, with_empty(with_empty({}, "[]", 'T', "0", "X"), "[]", 'T', "1", "X"));
        CHECK_MESSAGE(u.report.ok(), u.report.text());
        CHECK(u.count == 1);
    }
}

TEST_CASE("free extension by a term") {
    auto m = term_model(1, 3);
    auto e = extend_by_term(m, "0");
    require_model(e, 3);
    CHECK(e->type_of(e->empty(), e->x()) == "0");
    auto I = inclusion(e);
    require_strict(I, 3);

    // a model with a closed term of type 0, so that x can be substituted away
    auto e2 = extend_by_term(e, "0");
    require_model(e2, 2);
    auto S = substitution_morphism(e2, e->x());
    require_strict(S, 2);
    CHECK(tabulate(compose_morphisms(S, inclusion(e2)), 2) == tabulate(identity_morphism(e), 2));
    CHECK(S.tm(e2->empty(), e2->x()) == e->x());

    // I# with o = x is the identity
    auto id = term_sharp(e, I, e->x());
    CHECK(tabulate(id, 2) == tabulate(identity_morphism(e), 2));
}

TEST_CASE("term extension universal property") {
    auto m = term_model(1, 3);
    auto e = extend_by_term(m, "0");
    auto D = fam_prop(3);
    auto F = initial_morphism(m, D, {"[1]"});
    auto Fs = term_sharp(e, F, "[1]");
    require_strict(Fs, 2);
    CHECK(tabulate(compose_morphisms(Fs, inclusion(e)), 2) == tabulate(F, 2));
    CHECK(Fs.tm(e->empty(), e->x()) == "[1]");

    // F# factors as S_o . F_tm
    auto De = extend_by_term(D, "[1]");
    auto Ftm = term_functor(e, De, F);
    require_strict(Ftm, 2);
    auto So = substitution_morphism(De, "[1]");
    CHECK(tabulate(compose_morphisms(So, Ftm), 2) == tabulate(Fs, 2));

    auto pins = with_empty(pins_along(inclusion(e), F, 2), e->empty(), 't', e->x(), "[1]");
    auto u = verify_unique(Fs, 2, pins);
    CHECK_MESSAGE(u.report.ok(), u.report.text());
    CHECK(u.count == 1);
}

TEST_CASE("formal basic type") {
    auto m = term_model(1, 3);
    auto e = extend_by_type(m);
    require_model(e, 3);
    CHECK(e->ty(e->empty()) == std::vector<Key>{"X", FormalExtension::constant("0")});
    auto I = formal_inclusion(e);
    require_strict(I, 3);

    auto S = type_insertion(e, "0");
    require_strict(S, 3);
    CHECK(tabulate(compose_morphisms(S, I), 3) == tabulate(identity_morphism(m), 3));
    CHECK(S.ty(e->empty(), "X") == "0");

    auto D = term_model(2, 3);
    auto F = initial_morphism(m, D, {"0"});
    auto Fs = type_sharp(e, F, "1");
    require_strict(Fs, 3);
    auto pins = with_empty(pins_along(I, F, 3), e->empty(), 'T', "X", "1");
    auto u = verify_unique(Fs, 3, pins);
    CHECK_MESSAGE(u.report.ok(), u.report.text());
    CHECK(u.count == 1);
}

TEST_CASE("formal unit type") {
    auto m = term_model(1, 3);
    auto e = extend_by_unit(m);
    require_model(e, 3);
    auto un = check_unit(e, e->unit(), 3);
    CHECK_MESSAGE(un.ok(), un.text());
    require_strict(formal_inclusion(e), 3);

    auto D = fam_prop(3);
    auto F = initial_morphism(m, D, {"[0]"});
    auto Fs = unit_sharp(e, F, D->unit());
    require_strict(Fs, 2);
    CHECK(check_unit_morphism(Fs, e->unit(), D->unit()).ok());
    auto pins = pins_along(formal_inclusion(e), F, 2);
    pins = with_empty(pins, e->empty(), 'T', "1", D->unit().unit);
    pins = with_empty(pins, e->empty(), 't', "*", D->unit().star);
    auto u = verify_unique(Fs, 2, pins);
    CHECK_MESSAGE(u.report.ok(), u.report.text());
    CHECK(u.count == 1);

    // a model that already has a unit absorbs the formal one
    auto p = fam_prop(2);
    auto ep = extend_by_unit(p);
    auto N = unit_insertion(ep, p->unit());
    require_strict(N, 2);
    CHECK(tabulate(compose_morphisms(N, formal_inclusion(ep)), 2) == tabulate(identity_morphism(p), 2));
}

TEST_CASE("free dependent sums") {
    auto m = term_model(1, 3);
    auto e = extend_by_sigma(m, 2);
    require_model(e, 3);
    auto s = check_sigma(e, e->sigma(), 2);
    CHECK_MESSAGE(s.ok(), s.text());
    auto I = sigma_inclusion(e);
    require_strict(I, 3);

    auto D = fam_prop(3);
    auto F = initial_morphism(m, D, {"[1]"});
    auto Fs = sigma_sharp(e, F, D->sigma());
    require_strict(Fs, 2);
    CHECK(check_sigma_morphism(Fs, e->sigma(), D->sigma(), 2).ok());
    CHECK(tabulate(compose_morphisms(Fs, I), 2) == tabulate(F, 2));
    Pins pins = pins_along(I, F, 2);
    pins.accept = preserves_sigma(e, e->sigma(), D, D->sigma());
    auto u = verify_unique(Fs, 2, pins);
    CHECK_MESSAGE(u.report.ok(), u.report.text());
    CHECK(u.count == 1);

    // summing trees in a model that already has sums
    auto p = fam_prop(2);
    auto ep = extend_by_sigma(p, 2);
    auto S = tree_summation(ep, p->sigma());
    require_strict(S, 2);
    CHECK(check_sigma_morphism(S, ep->sigma(), p->sigma(), 2).ok());
    CHECK(tabulate(compose_morphisms(S, sigma_inclusion(ep)), 2) == tabulate(identity_morphism(p), 2));
}

TEST_CASE("association of sums gives distinct but isomorphic contexts") {
    auto m = term_model(1, 3);
    auto e = extend_by_sigma(m, 3);
    Key A = tree_leaf("0");
    Key left = tree_node(tree_node(A, A), A);
    Key right = tree_node(A, tree_node(A, A));
    CHECK(left != right);
    Key X = e->ext(e->empty(), left).extended;
    Key Y = e->ext(e->empty(), right).extended;
    CHECK(X != Y);
    CHECK(e->underlying(X) == e->underlying(Y));
    CHECK(find_iso(*e, X, Y));
}

TEST_CASE("polynomial composite of natural models") {
    auto p = term_model(2, 3);
    SUBCASE("the identity classifier is a unit") {
        auto c = poly_composite_models(p, std::make_shared<IdentityClassifier>(p));
        require_model(c, 2);
        for (const auto& G : p->objects(2))
            for (const auto& A : p->ty(G)) CHECK(c->ext(G, tup({"*", A})).extended == p->ext(G, A).extended);
        auto c2 = poly_composite_models(std::make_shared<IdentityClassifier>(p), p);
        require_model(c2, 2);
    }
    SUBCASE("composite of the term model with itself") {
        auto c = poly_composite_models(p, p);
        require_model(c, 2);
        auto sq = check_ext_squares(c, 2);
        CHECK_MESSAGE(sq.ok(), sq.text());
        CHECK(c->ty("[]").size() == 4);
        CHECK(c->ext("[]", tup({"0", "1"})).extended == "[0,1]");
    }
    CHECK_THROWS(poly_composite_models(p, fam_prop(2)));
}
