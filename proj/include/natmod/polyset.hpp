#pragma once

#include "natmod/report.hpp"

#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <tuple>
#include <vector>

namespace natmod {
class FamProp;
}

namespace natmod::poly {

// Finite sets are sizes {0..n-1}; a map is its table of values.
using Map = std::vector<int>;

bool is_map(const Map& m, int dom, int cod);
Map compose_maps(const Map& g, const Map& f);  // g . f
Map identity_map(int n);
std::optional<Map> invert(const Map& m, int cod);
std::vector<int> fibre(const Map& m, int y);  // ascending

// Chosen pullback of f : X -> Z and g : Y -> Z: pairs (x, y) in lexicographic order.
std::vector<std::pair<int, int>> pullback(const Map& f, const Map& g);

// I <-s- B -f-> A -t-> J
struct Polynomial {
    int I = 1, B = 0, A = 0, J = 1;
    Map s, f, t;

    void validate() const;  // throws MalformedInput
    std::vector<int> fibre_over(int a) const { return fibre(f, a); }
    std::string key() const;
    bool operator==(const Polynomial&) const = default;
};

// 1 <- B -f-> A -> 1
Polynomial from_map(int B, int A, const Map& f);
// I <- I -> I -> I with identities
Polynomial identity_poly(int I);
// <s, f> : B -> I x A as a polynomial 1 -> 1
Polynomial slice_reduction(const Polynomial& F);

// An I-indexed family of finite sets, and maps between such families.
using Family = std::vector<int>;
using FamilyMap = std::vector<Map>;

struct Element {
    int a;
    std::vector<int> sec;  // sec[k] in X_{s(b)} for the k-th element b of B_a
    auto operator<=>(const Element&) const = default;
};

// P_F(X)_j = sum over a in A_j of the sections prod over b in B_a of X_{s(b)}
struct Extension {
    std::vector<std::vector<Element>> elems;  // per j, in enumeration order
    std::vector<std::map<Element, int>> index;

    Family family() const;
    int find(int j, const Element& e) const;
    std::size_t total() const;
};

Extension extend(const Polynomial& F, const Family& X);
// Functorial action on a family of maps h : X -> Y.
FamilyMap extend_map(const Polynomial& F, const Family& X, const Family& Y, const FamilyMap& h);

bool is_family_map(const FamilyMap& h, const Family& X, const Family& Y);
bool is_family_bijection(const FamilyMap& h, const Family& X, const Family& Y);

// ---- composition ----

struct Composite {
    Polynomial poly;  // I <- N -> M -> K
    std::vector<std::pair<int, int>> H;                // (d, a) with t(a) = u(d)
    std::vector<std::pair<int, std::vector<int>>> M;   // (c, m) with m over D_c
    std::vector<std::pair<int, int>> L;                // (index into M, d)
    std::vector<std::tuple<int, int, int>> N;          // (index into M, d, b)
    Map h, k, e, q, w, p, n;
};

// G . F for F : I -> J and G : J -> K.
Composite compose(const Polynomial& G, const Polynomial& F);

// P_{G.F}(X) -> P_G(P_F(X)), componentwise over K.
FamilyMap composite_witness(const Composite& GF, const Polynomial& G, const Polynomial& F, const Family& X);
// Sizes, bijectivity of the witness at X and its naturality along h : X -> Y.
Report check_composition(const Polynomial& G, const Polynomial& F, const Family& X, const Family& Y,
                         const FamilyMap& h);

// ---- Beck-Chevalley and distributivity ----

// Pullback square B -v-> D, B -f-> A, A -u-> C, D -g-> C.
struct Square {
    int A, B, C, D;
    Map f, g, u, v;
    bool is_pullback() const;
};

struct BCWitness {
    // per d in D, bijections from sum (resp. product) over A_{g(d)} to the one over B_d
    std::vector<Map> sigma, pi;
    std::vector<int> sigma_size, pi_size;  // sizes of both sides agree by construction
};

// X is an A-indexed family.
BCWitness beck_chevalley_witness(const Square& sq, const Family& X);
Report check_beck_chevalley(const Square& sq, const Family& X, const Family& Y, const FamilyMap& h);

struct DistWitness {
    // per a in A: left side prod_b sum_{c in C_b} X_c, right side sum_m prod_b X_{m(b)}
    std::vector<int> left_size, right_size;
    std::vector<Map> bijection;  // left -> right
};

DistWitness distributivity_witness(const Map& u, int C, const Map& f, int B, int A, const Family& X);
Report check_distributivity(const Map& u, int C, const Map& f, int B, int A, const Family& X, const Family& Y,
                            const FamilyMap& h);

// ---- the two correspondences for P_f with I = J = 1 ----

struct Pairing {
    Map g1;                                   // Y -> A
    std::vector<std::pair<int, int>> domain;  // Delta_{g1}(B) as pairs (y, b)
    Map g2;                                   // Delta_{g1}(B) -> X
};

// g : Y -> P_f(X), given by indices into extend(F, {X})
Pairing lemma5(const Polynomial& F, int X, const Map& g);
Map lemma5_inverse(const Polynomial& F, int X, const Pairing& p);

// Elements (a, m, b, b') of sum_a sum_{m in A^{B_a}} sum_{b in B_a} B_{m(b)}.
std::vector<std::tuple<int, std::vector<int>, int, int>> quadruple_object(const Polynomial& F);

struct Quadruple {
    Map g1;                                   // Y -> A
    std::vector<std::pair<int, int>> domain;  // Delta_{g1}(B)
    Map g2;                                   // Delta_{g1}(B) -> A
    Map g3;                                   // Y -> B over A
    Map g4;                                   // Y -> B with f . g4 = g2 . <id, g3>
};

Quadruple lemma11_5(const Polynomial& F, const Map& g);
Map lemma11_5_inverse(const Polynomial& F, const Quadruple& q);

// ---- morphisms of polynomials ----

struct PolyMorphism {
    Polynomial dom, cod;
    std::vector<std::pair<int, int>> carrier;  // D_phi, with phi1 and the top map read off as (a, d)
    Map phi0, phi1, phi2;

    int size() const { return static_cast<int>(carrier.size()); }
    bool cartesian() const;
    Report check(const std::string& name = "cell") const;
};

// D_phi is the chosen pullback of phi0 along g; phi2 must lie over A.
PolyMorphism make_morphism(const Polynomial& F, const Polynomial& G, const Map& phi0, const Map& phi2);
// A pullback square (phi0, sq : B -> D) read as a cartesian cell; throws if it is not a pullback.
PolyMorphism from_square(const Polynomial& F, const Polynomial& G, const Map& phi0, const Map& sq);
Map square_map(const PolyMorphism& phi);  // phi1 . phi2^-1, cartesian only
PolyMorphism identity_cell(const Polynomial& F);

PolyMorphism vertical(const PolyMorphism& psi, const PolyMorphism& phi);  // psi . phi
// psi * phi : G.F => G'.F' for cartesian phi : F => F', psi : G => G'
PolyMorphism horizontal(const PolyMorphism& psi, const PolyMorphism& phi);
PolyMorphism whisker_left(const Polynomial& G, const PolyMorphism& phi);   // G * phi
PolyMorphism whisker_right(const PolyMorphism& psi, const Polynomial& F);  // psi * F

// The induced map P_F(X) -> P_G(X).
FamilyMap induced(const PolyMorphism& phi, const Family& X);

bool same_cell(const PolyMorphism& a, const PolyMorphism& b);

// A natural bijection P_F(X) -> P_G(X) determines an isomorphism F => G, read off at
// the terminal family and at the generic family X_i = s^-1(i).
using NaturalMap = std::function<FamilyMap(const Family&)>;
PolyMorphism cell_from_natural(const Polynomial& F, const Polynomial& G, const NaturalMap& w);

// (H.G).F => H.(G.F)
PolyMorphism associator(const Polynomial& H, const Polynomial& G, const Polynomial& F);
PolyMorphism left_unitor(const Polynomial& F);   // F => i_J . F
PolyMorphism right_unitor(const Polynomial& F);  // F => F . i_I

// ---- adjustments ----

struct Adjustment {
    PolyMorphism src, dst;
    Map alpha;  // D_src -> D_dst with dst.phi2 . alpha = src.phi2
};

// Every map D_phi -> D_psi over B.
std::vector<Map> all_adjustments(const PolyMorphism& phi, const PolyMorphism& psi);
// Requires psi cartesian; alpha = psi2^-1 . phi2.
Adjustment unique_adjustment(const PolyMorphism& phi, const PolyMorphism& psi);

// ---- pseudomonad data ----

struct PseudomonadReport {
    Report report;
    std::optional<Adjustment> alpha, lambda, rho;
};

PseudomonadReport check_pseudomonad_data(const Polynomial& p, const PolyMorphism& eta, const PolyMorphism& mu);

struct MonadData {
    Polynomial p;
    PolyMorphism eta, mu;
};

// The classifier of the propositions model at the terminal context, with unit and sums.
MonadData classifier_monad(const FamProp& m);
// A = B = 1
MonadData trivial_monad();

// ---- random instances ----

Polynomial random_polynomial(std::mt19937& rng, int max_size, int I = 1, int J = 1);
Family random_family(std::mt19937& rng, int n, int max_size);
FamilyMap random_family_map(std::mt19937& rng, const Family& X, const Family& Y);
// A random family admitting a map from X.
Family random_target(std::mt19937& rng, const Family& X, int max_size);
Square random_pullback_square(std::mt19937& rng, int max_size);
// Two cartesian cells with the same source and target.
std::pair<PolyMorphism, PolyMorphism> random_cartesian_pair(std::mt19937& rng, int max_size);

}  // namespace natmod::poly
