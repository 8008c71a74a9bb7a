#include <doctest.h>

#include "natmod/presheaf.hpp"

#include <map>
#include <set>

using namespace natmod;

namespace {

std::shared_ptr<FinCat> chain3() {
    return poset_category({{true, true, true}, {false, true, true}, {false, false, true}});
}

// bottom <= a, bottom <= b; no top
std::shared_ptr<FinCat> vee() {
    return poset_category({{true, true, true}, {false, true, false}, {false, false, true}});
}

Presheaf constant(CatPtr base, int bound, std::vector<Key> xs) {
    Presheaf P;
    P.base = base;
    P.bound = bound;
    P.name = "const";
    P.values = [xs](const Key&) { return xs; };
    P.act = [](const Key&, const Key& x) { return x; };
    return P;
}

// All natural transformations y(D) -> P by brute force over component functions.
std::vector<std::map<std::pair<Key, Key>, Key>> all_nats_from_yoneda(const Presheaf& P, const Key& D) {
    const auto& C = *P.base;
    auto objs = P.fragment();
    std::vector<std::pair<Key, Key>> slots;  // (E, e in hom(E,D))
    std::vector<std::vector<Key>> choices;
    for (const auto& E : objs)
        for (const auto& e : C.hom(E, D)) {
            slots.push_back({E, e});
            choices.push_back(P.values(E));
        }
    std::vector<std::map<std::pair<Key, Key>, Key>> out;
    std::vector<std::size_t> idx(slots.size(), 0);
    for (auto& ch : choices)
        if (ch.empty()) return out;
    while (true) {
        std::map<std::pair<Key, Key>, Key> a;
        for (std::size_t i = 0; i < slots.size(); ++i) a[slots[i]] = choices[i][idx[i]];
        bool natural = true;
        for (const auto& [slot, v] : a) {
            for (const auto& F : objs)
                for (const auto& h : C.hom(F, slot.first))
                    if (a[{F, C.compose(slot.second, h)}] != P.act(h, v)) natural = false;
        }
        if (natural) out.push_back(a);
        std::size_t i = slots.size();
        while (i > 0) {
            --i;
            if (++idx[i] < choices[i].size()) break;
            idx[i] = 0;
            if (i == 0) return out;
        }
        if (slots.empty()) return out;
    }
}

// Definition-chasing verifier: every cone from every representable has exactly one mediator.
bool brute_force_is_pullback(const NatTrans& f, const NatTrans& x, const NatTrans& top, const NatTrans& left) {
    const auto& C = *f.dom.base;
    for (const auto& D : f.dom.fragment()) {
        auto xs = all_nats_from_yoneda(x.dom, D);
        auto ys = all_nats_from_yoneda(f.dom, D);
        auto ps = all_nats_from_yoneda(top.dom, D);
        for (const auto& u : xs)
            for (const auto& v : ys) {
                bool cone = true;
                for (const auto& [slot, val] : u)
                    if (x.at(slot.first, val) != f.at(slot.first, v.at(slot))) cone = false;
                if (!cone) continue;
                int n = 0;
                for (const auto& m : ps) {
                    bool med = true;
                    for (const auto& [slot, val] : m)
                        if (left.at(slot.first, val) != u.at(slot) || top.at(slot.first, val) != v.at(slot)) med = false;
                    n += med;
                }
                if (n != 1) return false;
            }
    }
    (void)C;
    return true;
}

}  // namespace

TEST_CASE("yoneda basics") {
    auto c = chain3();
    auto Y = yoneda(c, 3, "2");  // 2 is terminal
    for (const auto& d : c->objs) CHECK(Y.values(d).size() == 1);
    auto Y0 = yoneda(c, 3, "0");
    for (const auto& d : c->objs) CHECK(Y0.values(d).size() == c->hom(d, "0").size());
    CHECK(check_presheaf(Y0).ok());
    CHECK(check_nattrans(yoneda_map(c, 3, "0<=1")).ok());
}

TEST_CASE("yoneda in truncated Fin^op at the 2-element set") {
    auto fin = std::make_shared<FinSliceOp>(1);
    auto Y = yoneda(fin, 3, "[0,0]");
    CHECK(check_presheaf(Y).ok());
    // In the opposite category y(2)(d) = Fin(2, d): |d|^2 functions, counted independently.
    for (const auto& d : fin->objects(3)) {
        std::size_t n = parse_int_list(d).size(), count = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) ++count;
        CHECK(Y.values(d).size() == count);
    }
    CHECK(Y.values("[0,0,0]").size() == 9);
}

TEST_CASE("yoneda is faithful") {
    auto fin = std::make_shared<FinSliceOp>(1);
    const Key c = "[0,0]", d = "[0]";
    auto fs = fin->hom(c, d);
    REQUIRE(fs.size() == 2);
    auto a = yoneda_map(fin, 2, fs[0]), b = yoneda_map(fin, 2, fs[1]);
    bool differ = false;
    for (const auto& e : fin->objects(2))
        for (const auto& x : a.dom.values(e)) differ = differ || a.at(e, x) != b.at(e, x);
    CHECK(differ);
}

TEST_CASE("identity square is a pullback") {
    auto c = chain3();
    auto Y = yoneda(c, 3, "1");
    auto id = identity_nat(Y);
    CHECK(check_pullback_square(id, id, id, id));
    CHECK(brute_force_is_pullback(id, id, id, id));
}

TEST_CASE("padding one fibre breaks the square") {
    auto c = poset_category({{true, true}, {false, true}});
    auto X = yoneda(c, 2, "1");
    auto id = identity_nat(X);
    // X + 1 with the extra point glued onto the top arrow into 1
    auto P = sum_presheaves(X, terminal_presheaf(c, 2));
    NatTrans m{P, X, [](const Key& obj, const Key& z) {
                   auto parts = split_tup(z);
                   return parts[0] == "0" ? parts[1] : obj + "<=1";
               }};
    CHECK(check_nattrans(m).ok());
    CHECK_FALSE(check_pullback_square(id, id, m, m));
    CHECK_FALSE(brute_force_is_pullback(id, id, m, m));
    CHECK(pullback_square_report(id, id, m, m).cites("injective"));
}

TEST_CASE("shape mismatch is malformed input") {
    auto c = chain3();
    auto a = identity_nat(yoneda(c, 3, "1"));
    auto b = identity_nat(yoneda(c, 3, "2"));
    CHECK_THROWS_AS(pullback_square_report(a, b, a, a), MalformedInput);
}

TEST_CASE("oracle agrees with the definition-chasing verifier") {
    auto c = vee();
    // pullbacks of yoneda maps, some of which are not pullbacks
    std::vector<Key> arrows = {"0<=0", "0<=1", "0<=2", "1<=1", "2<=2"};
    int agreements = 0;
    for (const auto& f : arrows)
        for (const auto& g : arrows) {
            if (c->cod(f) != c->cod(g)) continue;
            auto F = yoneda_map(c, 3, f), G = yoneda_map(c, 3, g);
            for (const auto& P : c->objs)
                for (const auto& l : c->hom(P, c->dom(g)))
                    for (const auto& t : c->hom(P, c->dom(f))) {
                        if (c->compose(g, l) != c->compose(f, t)) continue;
                        auto L = yoneda_map(c, 3, l), T = yoneda_map(c, 3, t);
                        bool fast = check_pullback_square(F, G, T, L);
                        bool slow = brute_force_is_pullback(F, G, T, L);
                        CHECK(fast == slow);
                        agreements += fast == slow;
                    }
        }
    CHECK(agreements > 5);
    // the pointwise pullback construction always passes both
    auto a = yoneda_map(c, 3, "1<=1");
    auto b = identity_nat(yoneda(c, 3, "1"));
    auto pb = pullback_presheaves(a, b);
    CHECK(check_pullback_square(b, a, pb.top, pb.left));
    CHECK(brute_force_is_pullback(b, a, pb.top, pb.left));
}

TEST_CASE("representability: identity and failures") {
    auto c = chain3();
    auto Y = yoneda(c, 3, "1");
    auto rep = is_representable(identity_nat(Y), 3);
    CHECK(rep.ok());
    for (const auto& w : rep.witnesses) {
        CHECK(w.found);
        CHECK(w.obj == w.ctx);
        CHECK(w.mor == c->identity(w.ctx));
        CHECK(w.var == w.elem);
    }
    auto one = std::make_shared<FinCat>();
    one->objs = {"*"};
    one->homs[{"*", "*"}] = {"id"};
    one->ids["*"] = "id";
    one->comp[{"id", "id"}] = "id";
    one->term = "*";
    one->reindex();
    auto two = constant(one, 1, {"x", "y"});
    auto bad = is_representable(to_terminal_nat(two), 1);
    CHECK_FALSE(bad.ok());
    CHECK(bad.report.cites("no-witness"));
    REQUIRE(bad.witnesses.size() == 1);
    CHECK_FALSE(bad.witnesses[0].found);
}

TEST_CASE("sums and pullbacks of presheaves") {
    auto c = chain3();
    auto Y = yoneda(c, 3, "1");
    auto S = sum_presheaves(Y, empty_presheaf(c, 3));
    for (const auto& d : c->objs) CHECK(S.values(d).size() == Y.values(d).size());
    CHECK(check_presheaf(S).ok());

    // kernel pair of the unique map y(1) + y(2) -> 1 : fibrewise |fibre|^2
    auto P = sum_presheaves(Y, yoneda(c, 3, "2"));
    auto p = to_terminal_nat(P);
    auto kp = pullback_presheaves(p, p);
    CHECK(check_presheaf(kp.P).ok());
    for (const auto& d : c->objs) {
        std::map<Key, std::size_t> fib;
        for (const auto& x : P.values(d)) ++fib[p.at(d, x)];
        std::size_t sq = 0;
        for (const auto& [z, n] : fib) sq += n * n;
        CHECK(kp.P.values(d).size() == sq);
    }
}

TEST_CASE("elements category") {
    auto c = chain3();
    auto Y = yoneda(c, 3, "1");
    auto E = elements(Y);
    CHECK(check_category(E).ok());
    // y(1) has elements over 0 and 1 only
    CHECK(E.objs.size() == 2);
    // projection to the base is a functor
    auto src = std::make_shared<FinCat>(E);
    FinFunctor pi{src, c, {}, {}, false};
    for (const auto& o : E.objs) pi.obj[o] = split_tup(o)[0];
    for (const auto& m : E.morphisms()) pi.mor[m] = split_tup(m)[0];
    CHECK(check_functor(pi).ok());
}

TEST_CASE("closure of representable maps over small posets") {
    for (auto c : {chain3(), vee()}) {
        std::vector<NatTrans> reps;
        for (const auto& x : c->objs)
            for (const auto& y : c->objs)
                for (const auto& f : c->hom(x, y)) {
                    auto m = yoneda_map(c, 3, f);
                    if (is_representable(m, 3).ok()) reps.push_back(m);
                }
        REQUIRE(reps.size() >= 3);
        for (const auto& a : reps)
            for (const auto& b : reps) {
                if (a.cod.name == b.dom.name) CHECK(is_representable(compose_nat(b, a), 3).ok());
                CHECK(is_representable(sum_nat(a, b), 3).ok());
                if (a.cod.name == b.cod.name) {
                    auto pb = pullback_presheaves(b, a);
                    CHECK(is_representable(pb.left, 3).ok());
                }
            }
    }
}
