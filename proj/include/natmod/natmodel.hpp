#pragma once

#include "natmod/presheaf.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>

namespace natmod {

struct ExtData {
    Key extended;  // Gamma.A
    Key proj;      // p_A : Gamma.A -> Gamma
    Key var;       // q_A in Tm(Gamma.A)
};

// A natural model over a bounded category of contexts. Types and terms are keys
// local to their context; ty/tm may be truncated for infinite presheaves, in
// which case is_type/is_term decide membership structurally.
class NaturalModel : public Category {
public:
    virtual Key empty() const = 0;
    std::optional<Key> terminal() const override { return empty(); }
    virtual Key to_terminal(const Key& ctx) const;

    virtual std::vector<Key> ty(const Key& ctx) const = 0;
    virtual std::vector<Key> tm(const Key& ctx) const = 0;
    virtual Key type_of(const Key& ctx, const Key& a) const = 0;
    virtual Key subst_ty(const Key& s, const Key& A) const = 0;  // A in Ty(cod s)
    virtual Key subst_tm(const Key& s, const Key& a) const = 0;
    virtual ExtData ext(const Key& ctx, const Key& A) const = 0;
    // Closed form for <s, a>_A when the construction has one.
    virtual std::optional<Key> pair(const Key& s, const Key& A, const Key& a) const;

    virtual bool is_type(const Key& ctx, const Key& A) const;
    virtual bool is_term(const Key& ctx, const Key& a) const;

    virtual int bound() const = 0;
    virtual std::string name() const = 0;
};

using ModelPtr = std::shared_ptr<const NaturalModel>;

// <s, a>_A : closed form if available, else the unique g : dom s -> cod s . A with
// p_A g = s and q_A[g] = a. Throws Undefined when there is none or several.
Key indsub(const NaturalModel& m, const Key& s, const Key& a, const Key& A);
Key section(const NaturalModel& m, const Key& ctx, const Key& A, const Key& a);  // <id, a>_A
// s.A : dom s . A[s] -> cod s . A
Key canonical_pullback(const NaturalModel& m, const Key& s, const Key& A);
// inverse of h if it is an isomorphism
std::optional<Key> inverse(const Category& c, const Key& h);
std::optional<Key> find_iso(const Category& c, const Key& x, const Key& y);

Presheaf ty_presheaf(ModelPtr m, int bound);
Presheaf tm_presheaf(ModelPtr m, int bound);
NatTrans typing(ModelPtr m, int bound);

// Equations (i)-(xxvii) of the essentially algebraic theory, on every
// instantiation inside the fragment. Violations are keyed by equation number.
Report check_eat(const NaturalModel& m, int bound);
// The presheaf oracle on each y(Gamma.A) -> Tm over y(Gamma) -> Ty.
Report check_ext_squares(ModelPtr m, int bound);
RepresentabilityReport model_representability(ModelPtr m, int bound);

struct UnitStructure {
    Key unit, star;
};

struct SigmaStructure {
    std::function<Key(const Key& ctx, const Key& A, const Key& B)> sigma;
    std::function<Key(const Key& ctx, const Key& A, const Key& B, const Key& a, const Key& b)> pair;
};

struct PiStructure {
    std::function<Key(const Key& ctx, const Key& A, const Key& B)> pi;
    std::function<Key(const Key& ctx, const Key& A, const Key& B, const Key& b)> lam;
};

// fst/snd and app are derived by inverting pair and lambda on their fibres.
std::optional<std::pair<Key, Key>> sigma_split(const NaturalModel& m, const SigmaStructure& s, const Key& ctx,
                                               const Key& A, const Key& B, const Key& p);
std::optional<Key> pi_app(const NaturalModel& m, const PiStructure& s, const Key& ctx, const Key& A, const Key& B,
                          const Key& f, const Key& a);

Report check_unit(ModelPtr m, const UnitStructure& u, int bound);
Report check_sigma(ModelPtr m, const SigmaStructure& s, int bound);
Report check_pi(ModelPtr m, const PiStructure& s, int bound);

// Premorphism in the right-adjoint convention.
struct NMorphism {
    ModelPtr src, tgt;
    std::string name;
    std::function<Key(const Key& ctx)> obj;
    std::function<Key(const Key& s)> mor;
    std::function<Key(const Key& ctx, const Key& A)> ty;
    std::function<Key(const Key& ctx, const Key& a)> tm;
};

NMorphism identity_morphism(ModelPtr m);
NMorphism compose_morphisms(const NMorphism& G, const NMorphism& F);  // G . F

struct MorphismReport {
    Report report;         // everything that was requested
    Report base;           // terminal, functoriality, naturality, typing square
    Report strict;         // F(G.A) = FG.FA, F p_A = p_FA, F q_A = q_FA
    Report weak;           // tau_A invertible
    Report pullbacks;      // the oracle on image squares
    bool ok() const { return report.ok(); }
};

MorphismReport check_morphism(const NMorphism& F, bool strict, int bound);

// tau_A = <F p_A, F q_A>_{FA} : F(Gamma.A) -> FGamma.FA
Key comparison(const NMorphism& F, const Key& ctx, const Key& A);
// Moves a type over F(Gamma.A) to FGamma.FA along the inverse of tau_A.
Key transport_ty(const NMorphism& F, const Key& ctx, const Key& A, const Key& B);
Key transport_tm(const NMorphism& F, const Key& ctx, const Key& A, const Key& b);

Report check_sigma_morphism(const NMorphism& F, const SigmaStructure& s, const SigmaStructure& t, int bound);
Report check_unit_morphism(const NMorphism& F, const UnitStructure& s, const UnitStructure& t);

struct Classification {
    Key mor;
    bool classified = false;
    Key type, iso;  // iso : dom mor -> cod mor . type with p_type . iso = mor
};

struct ClassifiedReport {
    Report report;
    std::vector<Classification> entries;
};

ClassifiedReport classified_morphisms(const NaturalModel& m, int bound);
std::optional<Classification> classify(const NaturalModel& m, const Key& s);

}  // namespace natmod
