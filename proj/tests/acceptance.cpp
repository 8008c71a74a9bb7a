// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "natmod/fincat.hpp"
#include "natmod/freemodel.hpp"
#include "natmod/models.hpp"
#include "natmod/natmodel.hpp"
#include "natmod/polyset.hpp"
#include "natmod/presheaf.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <tuple>

using namespace natmod;
using namespace natmod::poly;

namespace {

constexpr int kBound = 3;
constexpr double kCriterion1Seconds = 60.0;

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            if (!pass) detail << "; ";
            pass = false;
            detail << what;
        }
    }
    void require(const Report& r, const std::string& what) {
        if (!r.ok()) {
            std::string msg = what;
            if (!r.violations.empty()) msg += " [" + r.violations[0].law + "] " + r.violations[0].detail;
            require(false, msg);
        }
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Pins pin(Pins p, const Key& ctx, char sort, const Key& k, const Key& v) {
    p.fixed[{ctx, sort, k}] = v;
    return p;
}

// 1. EAT soundness of the term models.
void criterion1(Outcome& o) {
    auto t0 = std::chrono::steady_clock::now();
    for (int n : {0, 1, 2}) {
        auto m = term_model(n, kBound);
        o.require(check_eat(*m, kBound), "EAT for |I| = " + std::to_string(n));
        o.require(check_ext_squares(m, kBound), "extension squares for |I| = " + std::to_string(n));
        o.require(model_representability(m, kBound).report, "representability for |I| = " + std::to_string(n));
    }
    double s = seconds_since(t0);
    o.require(s < kCriterion1Seconds, "took " + std::to_string(s) + " s");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", s);
    if (o.pass) o.detail << "27 equations and every extension square for |I| in {0,1,2} in " << buf << " s";
}

// 2. Initiality of term_model({0,1}).
void criterion2(Outcome& o) {
    auto tm = term_model(2, kBound);
    struct Target {
        ModelPtr model;
        Key a, b;
    };
    std::vector<Target> targets{{tm, "0", "1"}, {fam_prop(kBound), "[1]", "[0]"}, {extend_by_type(term_model(0, kBound)), "X", "X"}};
    for (const auto& t : targets) {
        Pins pins = pin(pin({}, tm->empty(), 'T', "0", t.a), tm->empty(), 'T', "1", t.b);
        auto u = count_strict_morphisms(tm, t.model, kBound, pins, 3);
        o.require(u.report, "search into " + t.model->name());
        o.require(u.count == 1, t.model->name() + ": " + std::to_string(u.count) + " strict morphisms");
        auto F = initial_morphism(tm, t.model, {t.a, t.b});
        o.require(u.count == 1 && u.found[0] == tabulate(F, kBound), "survivor differs from the initial morphism");
    }
    if (o.pass) o.detail << "count = 1 into term_model(2), fam_prop and term_model(0)[X]";
}

// 3. Composition of polynomials against the composite extension.
void criterion3(Outcome& o) {
    std::mt19937 rng(2024);
    const int trials = 60;
    for (int i = 0; i < trials; ++i) {
        int I = 1 + i % 2, J = 1 + (i / 2) % 2, K = 1 + (i / 4) % 2;
        auto F = random_polynomial(rng, 3, I, J);
        auto G = random_polynomial(rng, 3, J, K);
        auto X = random_family(rng, I, 3);
        auto Y = random_target(rng, X, 3);
        o.require(check_composition(G, F, X, Y, random_family_map(rng, X, Y)), "trial " + std::to_string(i));
    }
    if (o.pass) o.detail << trials << " random pairs: sizes equal, witness bijective and natural";
}

bool round_trip(const Map& m, int n) {
    auto inv = invert(m, n);
    return inv && compose_maps(*inv, m) == identity_map(static_cast<int>(m.size())) &&
           compose_maps(m, *inv) == identity_map(n);
}

// 4. Beck-Chevalley and distributivity.
void criterion4(Outcome& o) {
    std::mt19937 rng(4048);
    const int trials = 60;
    for (int i = 0; i < trials; ++i) {
        auto sq = random_pullback_square(rng, 3);
        auto X = random_family(rng, sq.A, 3);
        auto Y = random_target(rng, X, 3);
        o.require(check_beck_chevalley(sq, X, Y, random_family_map(rng, X, Y)), "BC trial " + std::to_string(i));
        auto w = beck_chevalley_witness(sq, X);
        for (int d = 0; d < sq.D; ++d) {
            o.require(round_trip(w.sigma[d], w.sigma_size[d]), "BC sigma round trip");
            o.require(round_trip(w.pi[d], w.pi_size[d]), "BC pi round trip");
        }
    }
    for (int i = 0; i < trials; ++i) {
        int A = 1 + static_cast<int>(rng() % 3), B = 1 + static_cast<int>(rng() % 3), C = 1 + static_cast<int>(rng() % 3);
        Map f(B), u(C);
        for (auto& x : f) x = static_cast<int>(rng() % A);
        for (auto& x : u) x = static_cast<int>(rng() % B);
        auto X = random_family(rng, C, 3);
        auto Y = random_target(rng, X, 3);
        o.require(check_distributivity(u, C, f, B, A, X, Y, random_family_map(rng, X, Y)),
                  "distributivity trial " + std::to_string(i));
        auto w = distributivity_witness(u, C, f, B, A, X);
        for (int a = 0; a < A; ++a) {
            o.require(w.left_size[a] == w.right_size[a], "distributivity sizes");
            o.require(round_trip(w.bijection[a], w.right_size[a]), "distributivity round trip");
        }
    }
    if (o.pass) o.detail << trials << " squares and " << trials << " distributivity instances";
}

// 5. Free structures carry the structure they were built for.
void criterion5(Outcome& o) {
    auto m = term_model(1, kBound);
    auto u = extend_by_unit(m);
    o.require(check_unit(u, u->unit(), kBound), "unit");
    auto s = extend_by_sigma(m, 2);
    o.require(check_sigma(s, s->sigma(), kBound), "sigma");
    o.require(check_eat(*extend_by_term(m, "0"), kBound), "EAT of the term extension");
    o.require(check_eat(*extend_by_type(m), kBound), "EAT of the type extension");
    if (o.pass) o.detail << "check_unit, check_sigma with beta and eta, check_eat on both extensions";
}

// 6. Universal properties of the four extensions.
void criterion6(Outcome& o) {
    auto m = term_model(1, kBound);
    auto D = fam_prop(kBound);
    auto F = initial_morphism(m, D, {"[1]"});
    auto agree = [&](const NMorphism& Fs, const NMorphism& I, const std::string& what) {
        o.require(check_morphism(Fs, true, kBound).report, what + " strict");
        o.require(tabulate(compose_morphisms(Fs, I), kBound) == tabulate(F, kBound), what + ": F# . I != F");
    };
    auto unique = [&](const NMorphism& Fs, const Pins& pins, const std::string& what) {
        auto u = verify_unique(Fs, kBound, pins);
        o.require(u.report, what + " uniqueness");
        o.require(u.count == 1 && u.matches, what + ": a rival or no morphism");
    };
    {
        auto e = extend_by_term(m, "0");
        auto Fs = term_sharp(e, F, "[1]");
        agree(Fs, inclusion(e), "term");
        o.require(Fs.tm(e->empty(), e->x()) == "[1]", "term: F#(x) != o");
        unique(Fs, pin(pins_along(inclusion(e), F, kBound), e->empty(), 't', e->x(), "[1]"), "term");
    }
    {
        auto e = extend_by_type(m);
        auto I = formal_inclusion(e);
        auto Fs = type_sharp(e, F, "[0]");
        agree(Fs, I, "type");
        o.require(Fs.ty(e->empty(), "X") == "[0]", "type: F#(X) != O");
        unique(Fs, pin(pins_along(I, F, kBound), e->empty(), 'T', "X", "[0]"), "type");
    }
    {
        auto e = extend_by_unit(m);
        auto I = formal_inclusion(e);
        auto un = D->unit();
        auto Fs = unit_sharp(e, F, un);
        agree(Fs, I, "unit");
        o.require(check_unit_morphism(Fs, e->unit(), un), "unit preserved");
        auto pins = pin(pin(pins_along(I, F, kBound), e->empty(), 'T', e->unit().unit, un.unit), e->empty(), 't',
                        e->unit().star, un.star);
        unique(Fs, pins, "unit");
    }
    {
        auto e = extend_by_sigma(m, 2);
        auto I = sigma_inclusion(e);
        auto Fs = sigma_sharp(e, F, D->sigma());
        agree(Fs, I, "sigma");
        o.require(check_sigma_morphism(Fs, e->sigma(), D->sigma(), kBound), "sums preserved");
        Pins pins = pins_along(I, F, kBound);
        pins.accept = preserves_sigma(e, e->sigma(), D, D->sigma());
        unique(Fs, pins, "sigma");
    }
    if (o.pass) o.detail << "term, type, unit and sigma: equations hold and exactly one strict morphism";
}

// 7. Adjustments and the pseudomonad instance.
void criterion7(Outcome& o) {
    std::mt19937 rng(77);
    const int trials = 25;
    for (int i = 0; i < trials; ++i) {
        auto [phi, psi] = random_cartesian_pair(rng, 3);
        // the pulled-back carrier can grow to 9; keep every set within size 3
        while (phi.dom.B > 3) std::tie(phi, psi) = random_cartesian_pair(rng, 3);
        // every map D_phi -> D_psi, counted directly
        int n = phi.size(), k = psi.size(), found = 0;
        Map alpha(n, 0), hit;
        bool done = k == 0 && n > 0;
        while (!done) {
            if (compose_maps(psi.phi2, alpha) == phi.phi2) {
                ++found;
                hit = alpha;
            }
            int j = 0;
            while (j < n && ++alpha[j] == k) alpha[j++] = 0;
            done = j == n;
        }
        o.require(found == 1, "pair " + std::to_string(i) + ": " + std::to_string(found) + " adjustments");
        if (found == 1) o.require(unique_adjustment(phi, psi).alpha == hit, "unique_adjustment disagrees");
    }
    auto d = classifier_monad(*fam_prop(2));
    auto r = check_pseudomonad_data(d.p, d.eta, d.mu);
    o.require(r.report, "pseudomonad data");
    // sum over A of 1 = A = sum over 1 of A, elementwise on a few families
    auto lu = left_unitor(d.p), ru = right_unitor(d.p);
    for (const Family& X : {Family{0}, Family{1}, Family{2}, Family{3}}) {
        auto PX = extend(d.p, X).family();
        o.require(is_family_bijection(induced(lu, X), PX, extend(lu.cod, X).family()), "left unit law");
        o.require(is_family_bijection(induced(ru, X), PX, extend(ru.cod, X).family()), "right unit law");
    }
    if (o.pass) o.detail << trials << " cartesian pairs with one adjustment each; classifier (p, eta, mu) passes";
}

// 8. Closure of representable maps over small posets.
void criterion8(Outcome& o) {
    auto chain = poset_category({{true, true, true}, {false, true, true}, {false, false, true}});
    auto vee = poset_category({{true, true, true}, {false, true, false}, {false, false, true}});
    int checked = 0;
    for (auto c : {chain, vee}) {
        std::vector<NatTrans> all, reps;
        for (const auto& x : c->objs)
            for (const auto& y : c->objs)
                for (const auto& f : c->hom(x, y)) {
                    auto m = yoneda_map(c, 3, f);
                    all.push_back(m);
                    if (is_representable(m, 3).ok()) reps.push_back(m);
                }
        o.require(reps.size() >= 3, "too few representable maps");
        for (const auto& a : reps) {
            for (const auto& b : reps) {
                if (a.cod.name == b.dom.name) {
                    o.require(is_representable(compose_nat(b, a), 3).ok(), "composite");
                    ++checked;
                }
                o.require(is_representable(sum_nat(a, b), 3).ok(), "sum");
                ++checked;
            }
            for (const auto& g : all)
                if (g.cod.name == a.cod.name) {
                    o.require(is_representable(pullback_presheaves(g, a).left, 3).ok(), "pullback");
                    ++checked;
                }
        }
    }
    if (o.pass) o.detail << checked << " composites, sums and pullbacks over a 3-chain and a 3-element vee";
}

// 9. Sums associate only up to isomorphism.
void criterion9(Outcome& o) {
    auto e = extend_by_sigma(term_model(1, kBound), 3);
    Key A = tree_leaf("0");
    Key left = tree_node(tree_node(A, A), A), right = tree_node(A, tree_node(A, A));
    o.require(left != right, "type keys coincide");
    Key X = e->ext(e->empty(), left).extended, Y = e->ext(e->empty(), right).extended;
    o.require(X != Y, "context keys coincide");
    auto iso = find_iso(*e, X, Y);
    o.require(iso.has_value(), "no isomorphism found");
    if (o.pass) o.detail << left << " != " << right << ", iso " << *iso;
}

}  // namespace

int main() {
    std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria{
        {"EAT soundness of term models", criterion1},
        {"initiality of the term model", criterion2},
        {"polynomial composition", criterion3},
        {"Beck-Chevalley and distributivity", criterion4},
        {"free structures", criterion5},
        {"universal properties", criterion6},
        {"adjustments and pseudomonad data", criterion7},
        {"closure of representable maps", criterion8},
        {"non-associativity of free sums", criterion9},
    };
    int failed = 0, n = 0;
    for (const auto& [title, run] : criteria) {
        ++n;
        Outcome o;
        auto t0 = std::chrono::steady_clock::now();
        try {
            run(o);
        } catch (const std::exception& ex) {
            o.require(false, std::string("exception: ") + ex.what());
        }
        char secs[32];
        std::snprintf(secs, sizeof secs, "%.2f s", seconds_since(t0));
        std::cout << "criterion " << n << " " << (o.pass ? "PASS" : "FAIL") << ": " << title << " (" << o.detail.str()
                  << ") [" << secs << "]" << std::endl;
        failed += !o.pass;
    }
    return failed ? 1 : 0;
}
