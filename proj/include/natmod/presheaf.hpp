#pragma once

#include "natmod/fincat.hpp"

#include <functional>
#include <string>

namespace natmod {

// Finite-set-valued presheaf on the fragment of `base` up to `bound`.
// act(f, x) is x[f]: for f : C -> D and x in values(D) it lands in values(C).
struct Presheaf {
    CatPtr base;
    int bound = 0;
    std::string name;
    std::function<std::vector<Key>(const Key& obj)> values;
    std::function<Key(const Key& f, const Key& x)> act;

    std::vector<Key> fragment() const { return base->objects(bound); }
};

struct NatTrans {
    Presheaf dom, cod;
    std::function<Key(const Key& obj, const Key& x)> at;
};

Presheaf yoneda(CatPtr base, int bound, const Key& c);
// y(f) : y(dom f) -> y(cod f)
NatTrans yoneda_map(CatPtr base, int bound, const Key& f);
// The element x of P(c) as a map y(c) -> P.
NatTrans yoneda_element(const Presheaf& P, const Key& c, const Key& x);

Presheaf terminal_presheaf(CatPtr base, int bound);
Presheaf empty_presheaf(CatPtr base, int bound);
NatTrans identity_nat(const Presheaf& P);
NatTrans compose_nat(const NatTrans& g, const NatTrans& f);  // g . f
NatTrans to_terminal_nat(const Presheaf& P);

Report check_presheaf(const Presheaf& P);
Report check_nattrans(const NatTrans& a);

// Category of elements: objects (C,x), morphisms (f,y) : (C, y[f]) -> (D, y).
FinCat elements(const Presheaf& P);

// Coproduct with components tagged (0,x) and (1,y).
Presheaf sum_presheaves(const Presheaf& P, const Presheaf& Q);
NatTrans sum_nat(const NatTrans& a, const NatTrans& b);

struct PresheafPullback {
    Presheaf P;
    NatTrans left, top;  // P -> X, P -> Y
};
// Pointwise fibre product of x : X -> Z and f : Y -> Z with elements (u,v).
PresheafPullback pullback_presheaves(const NatTrans& x, const NatTrans& f);

// f : Y -> Z, x : X -> Z, top : P -> Y, left : P -> X. At each fragment object the
// comparison P(D) -> X(D) x_Z(D) Y(D) must be a bijection.
Report pullback_square_report(const NatTrans& f, const NatTrans& x, const NatTrans& top, const NatTrans& left);
bool check_pullback_square(const NatTrans& f, const NatTrans& x, const NatTrans& top, const NatTrans& left);

struct Witness {
    Key ctx, elem;  // (Gamma, A in X(Gamma))
    bool found = false;
    Key obj, mor, var;  // (B, g : B -> Gamma, y in Y(B))
};

struct RepresentabilityReport {
    Report report;
    std::vector<Witness> witnesses;
    bool ok() const { return report.ok(); }
};

// For each (Gamma, A) searches B among objects(witness_bound), g in hom(B, Gamma),
// y in Y(B) with p(y) = A[g], in that order, and keeps the first that makes the
// square a pullback on the fragment.
// extra_candidates are tried after objects(witness_bound).
RepresentabilityReport is_representable(const NatTrans& p, int witness_bound,
                                        const std::vector<Key>& extra_candidates = {});

}  // namespace natmod
