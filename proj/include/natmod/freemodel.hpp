#pragma once

#include "natmod/models.hpp"
#include "natmod/natmodel.hpp"

#include <map>
#include <memory>
#include <tuple>

namespace natmod {

// ---- type trees and term trees over a model ----
//
// A type tree over Gamma is ("l",A) with A in Ty(Gamma), or ("n",T1,T2) with T2 a
// tree over Gamma.T1. A term tree is ("l",a) or ("n",t1,t2,T2) where T2 is the
// right subtree of its type and t2 has type T2[<id,t1>].

Key tree_leaf(const Key& x);
Key tree_node(const Key& T1, const Key& T2);
Key term_node(const Key& t1, const Key& t2, const Key& T2);
bool is_leaf(const Key& T);
int leaf_count(const Key& T);

bool is_tree_type(const NaturalModel& m, const Key& ctx, const Key& T);
Key tree_subst(const NaturalModel& m, const Key& s, const Key& T);
Key tree_subst_tm(const NaturalModel& m, const Key& s, const Key& t);
Key tree_type_of(const NaturalModel& m, const Key& ctx, const Key& t);
// (Gamma.T, p_T, q_T) with p_[T1,T2] = p_T1 . p_T2
ExtData tree_repr(const NaturalModel& m, const Key& ctx, const Key& T);
// <s, t>_[T1,T2] = <<s, t1>_T1, t2>_T2
Key tree_indsub(const NaturalModel& m, const Key& s, const Key& t, const Key& T);
Key tree_section(const NaturalModel& m, const Key& ctx, const Key& T, const Key& t);
Key tree_pullback(const NaturalModel& m, const Key& s, const Key& T);  // s.T
std::vector<Key> type_trees(const NaturalModel& m, const Key& ctx, int max_leaves);
std::vector<Key> term_trees(const NaturalModel& m, const Key& ctx, const Key& T);

// ---- swap isomorphisms ----

struct SwapIso {
    Key source, target;  // Gamma.O.A[p_O] and Gamma.A.O[p_A]
    Key mor;
};

SwapIso swap_iso(const NaturalModel& m, const Key& ctx, const Key& O, const Key& A);

// ---- free extension by a term x : O ----

class ExtendedByTerm : public NaturalModel {
public:
    ExtendedByTerm(ModelPtr base, Key O);

    const NaturalModel& base() const { return *m_; }
    ModelPtr base_ptr() const { return m_; }
    const Key& basic_type() const { return O_; }
    Key x() const;  // the distinguished term over the empty context

    // Gamma . O[t] . A1 ... An
    Key underlying(const Key& X) const;
    Key lift(const Key& X, const Key& X2, const Key& g) const { return mor_key(X, X2, g); }
    Key inner(const Key& f) const { return mor_parts(f)[2]; }

    std::vector<Key> objects(int bound) const override;
    std::vector<Key> hom(const Key& src, const Key& dst) const override;
    Key compose(const Key& g, const Key& f) const override;
    Key identity(const Key& x) const override;
    Key dom(const Key& f) const override { return mor_parts(f)[0]; }
    Key cod(const Key& f) const override { return mor_parts(f)[1]; }

    Key empty() const override;
    Key to_terminal(const Key& ctx) const override;
    std::vector<Key> ty(const Key& ctx) const override;
    std::vector<Key> tm(const Key& ctx) const override;
    Key type_of(const Key& ctx, const Key& a) const override;
    Key subst_ty(const Key& s, const Key& A) const override;
    Key subst_tm(const Key& s, const Key& a) const override;
    ExtData ext(const Key& ctx, const Key& A) const override;
    std::optional<Key> pair(const Key& s, const Key& A, const Key& a) const override;
    bool is_type(const Key& ctx, const Key& A) const override;
    bool is_term(const Key& ctx, const Key& a) const override;

    int bound() const override { return m_->bound(); }
    std::string name() const override { return m_->name() + "<x:" + O_ + ">"; }

    // When A = A'[p_O] for a type A' over Gamma, the first such A'.
    std::optional<Key> collapse(const Key& ctx, const Key& A) const;
    Key gamma(const Key& X) const { return split_tup(X)[0]; }
    // projection U_X -> Gamma . O[t]
    Key to_base(const Key& X) const;

private:
    ModelPtr m_;
    Key O_;
    mutable std::map<Key, Key> under_;
};

std::shared_ptr<const ExtendedByTerm> extend_by_term(ModelPtr m, const Key& O);
NMorphism inclusion(std::shared_ptr<const ExtendedByTerm> e);
// F# : C<x:O> -> D for a strict F : C -> D and o : FO over the empty context.
NMorphism term_sharp(std::shared_ptr<const ExtendedByTerm> e, const NMorphism& F, const Key& o);
NMorphism substitution_morphism(std::shared_ptr<const ExtendedByTerm> e, const Key& o);
NMorphism extend_term_universal(std::shared_ptr<const ExtendedByTerm> e, const NMorphism& F, const Key& o);
// F_tm = (I . F)# with the target extended by F(O).
NMorphism term_functor(std::shared_ptr<const ExtendedByTerm> src, std::shared_ptr<const ExtendedByTerm> tgt,
                       const NMorphism& F);

// ---- formal basic types and formal unit types ----
//
// Contexts (Gamma, k0, A1, k1, ..., An, kn): the Ai are base types over
// Gamma.A1...A(i-1), the ki count formal variables; (Gamma, 0, A1, ...) is
// identified with (Gamma.A1, k1, ...).

struct Interleaved {
    Key gamma;
    std::vector<Key> types;
    std::vector<int> counts;  // counts.size() == types.size() + 1

    int formal() const;
    Key key() const;
    static Interleaved parse(const Key& X);
};

class FormalExtension : public NaturalModel {
public:
    enum class Kind { Type, Unit };
    FormalExtension(ModelPtr base, Kind kind);

    const NaturalModel& base() const { return *m_; }
    ModelPtr base_ptr() const { return m_; }
    Kind kind() const { return kind_; }

    Key formal_type() const { return kind_ == Kind::Type ? "X" : "1"; }
    Key formal_term(int j) const;
    static Key constant(const Key& x) { return tup({"c", x}); }

    Key underlying(const Key& X) const;  // Gamma.A1...An in the base
    Key inner(const Key& f) const;       // base component of a morphism
    std::vector<int> formal_map(const Key& f) const;  // k_cod -> k_dom, type kind only
    Key make(const Key& X, const Key& Y, const Key& s, const std::vector<int>& h) const;
    // Normalizes, then wraps base morphisms E(X) -> Gamma.
    Key normalize(Interleaved x) const;

    std::vector<Key> objects(int bound) const override;
    std::vector<Key> hom(const Key& src, const Key& dst) const override;
    Key compose(const Key& g, const Key& f) const override;
    Key identity(const Key& x) const override;
    Key dom(const Key& f) const override { return mor_parts(f)[0]; }
    Key cod(const Key& f) const override { return mor_parts(f)[1]; }

    Key empty() const override;
    Key to_terminal(const Key& ctx) const override;
    std::vector<Key> ty(const Key& ctx) const override;
    std::vector<Key> tm(const Key& ctx) const override;
    Key type_of(const Key& ctx, const Key& a) const override;
    Key subst_ty(const Key& s, const Key& A) const override;
    Key subst_tm(const Key& s, const Key& a) const override;
    ExtData ext(const Key& ctx, const Key& A) const override;
    std::optional<Key> pair(const Key& s, const Key& A, const Key& a) const override;
    bool is_type(const Key& ctx, const Key& A) const override;
    bool is_term(const Key& ctx, const Key& a) const override;

    int bound() const override { return m_->bound(); }
    std::string name() const override { return m_->name() + (kind_ == Kind::Type ? "[X]" : "[1]"); }

    UnitStructure unit() const { return {"1", "*"}; }

private:
    ModelPtr m_;
    Kind kind_;
};

std::shared_ptr<const FormalExtension> extend_by_type(ModelPtr m);
std::shared_ptr<const FormalExtension> extend_by_unit(ModelPtr m);
// The inclusion Gamma |-> (Gamma, 0) for either kind.
NMorphism formal_inclusion(std::shared_ptr<const FormalExtension> e);
// F# : C[X] -> D with F#(X) = O, for strict F : C -> D.
NMorphism type_sharp(std::shared_ptr<const FormalExtension> e, const NMorphism& F, const Key& O);
NMorphism type_insertion(std::shared_ptr<const FormalExtension> e, const Key& O);
// F# : C[1] -> D preserving the unit, for strict F : C -> D and a unit structure on D.
NMorphism unit_sharp(std::shared_ptr<const FormalExtension> e, const NMorphism& F, const UnitStructure& u);
NMorphism unit_insertion(std::shared_ptr<const FormalExtension> e, const UnitStructure& u);

// ---- free dependent sums ----

class ExtendedBySigma : public NaturalModel {
public:
    ExtendedBySigma(ModelPtr base, int max_leaves);

    const NaturalModel& base() const { return *m_; }
    ModelPtr base_ptr() const { return m_; }
    int max_leaves() const { return L_; }

    Key underlying(const Key& X) const;  // Gamma.T1...Tk in the base
    Key inner(const Key& f) const { return mor_parts(f)[2]; }

    std::vector<Key> objects(int bound) const override;
    std::vector<Key> hom(const Key& src, const Key& dst) const override;
    Key compose(const Key& g, const Key& f) const override;
    Key identity(const Key& x) const override;
    Key dom(const Key& f) const override { return mor_parts(f)[0]; }
    Key cod(const Key& f) const override { return mor_parts(f)[1]; }

    Key empty() const override;
    Key to_terminal(const Key& ctx) const override;
    std::vector<Key> ty(const Key& ctx) const override;
    std::vector<Key> tm(const Key& ctx) const override;
    Key type_of(const Key& ctx, const Key& a) const override;
    Key subst_ty(const Key& s, const Key& A) const override;
    Key subst_tm(const Key& s, const Key& a) const override;
    ExtData ext(const Key& ctx, const Key& A) const override;
    std::optional<Key> pair(const Key& s, const Key& A, const Key& a) const override;
    bool is_type(const Key& ctx, const Key& A) const override;
    bool is_term(const Key& ctx, const Key& a) const override;

    int bound() const override { return m_->bound(); }
    std::string name() const override { return m_->name() + "[Sigma]"; }

    SigmaStructure sigma() const;

private:
    ModelPtr m_;
    int L_;
    mutable std::map<Key, Key> under_;
};

std::shared_ptr<const ExtendedBySigma> extend_by_sigma(ModelPtr m, int max_leaves = 2);
NMorphism sigma_inclusion(std::shared_ptr<const ExtendedBySigma> e);
// F# : C[Sigma] -> D preserving sums, for strict F : C -> D and sums s on D.
NMorphism sigma_sharp(std::shared_ptr<const ExtendedBySigma> e, const NMorphism& F, const SigmaStructure& s);
NMorphism tree_summation(std::shared_ptr<const ExtendedBySigma> e, const SigmaStructure& s);
// Collapses a type tree over Delta in a model with sums to a single type.
Key sum_tree(const NaturalModel& d, const SigmaStructure& s, const Key& ctx, const Key& T);

// ---- initial morphism out of the term model ----

NMorphism initial_morphism(std::shared_ptr<const TermModel> tm, ModelPtr target, const std::vector<Key>& O);

// ---- polynomial composite (C, q.p) ----

class PolyComposite : public ModelView {
public:
    PolyComposite(ModelPtr p, ModelPtr q) : ModelView(p), q_(std::move(q)) {}

    std::vector<Key> ty(const Key& ctx) const override;
    std::vector<Key> tm(const Key& ctx) const override;
    Key type_of(const Key& ctx, const Key& a) const override;
    Key subst_ty(const Key& s, const Key& A) const override;
    Key subst_tm(const Key& s, const Key& a) const override;
    ExtData ext(const Key& ctx, const Key& A) const override;
    std::optional<Key> pair(const Key& s, const Key& A, const Key& a) const override;
    bool is_type(const Key& ctx, const Key& A) const override;
    bool is_term(const Key& ctx, const Key& a) const override;
    std::string name() const override { return q_->name() + "." + inner_->name(); }

private:
    ModelPtr q_;
};

std::shared_ptr<const PolyComposite> poly_composite_models(ModelPtr p, ModelPtr q);

// ---- bounded uniqueness of strict morphisms ----

struct MorphismTable {
    std::map<Key, Key> obj, mor;
    std::map<std::pair<Key, Key>, Key> ty, tm;
    bool operator==(const MorphismTable&) const = default;
};

// Values of F on the fragment of its source up to bound.
MorphismTable tabulate(const NMorphism& F, int bound);

struct Pins {
    // (context, 'T' or 't', type or term) -> prescribed image
    std::map<std::tuple<Key, char, Key>, Key> fixed;
    // extra condition on complete candidates, e.g. preservation of sums
    std::function<bool(const MorphismTable&)> accept;
};

// Pins saying that the searched morphism agrees with F after G, on G's image.
Pins pins_along(const NMorphism& G, const NMorphism& F, int bound);
std::function<bool(const MorphismTable&)> preserves_sigma(ModelPtr C, const SigmaStructure& s, ModelPtr D,
                                                          const SigmaStructure& t);

struct UniquenessReport {
    Report report;
    std::size_t count = 0;  // capped
    bool matches = false;   // the single survivor is the given morphism
    std::vector<MorphismTable> found;
};

// Enumerates strict morphisms C -> D on the fragment up to bound that satisfy the pins,
// stopping after cap solutions. Every fragment object must be reachable from the
// empty context by extensions inside the fragment.
UniquenessReport count_strict_morphisms(ModelPtr C, ModelPtr D, int bound, const Pins& pins, std::size_t cap = 2);
UniquenessReport verify_unique(const NMorphism& F, int bound, const Pins& pins);

}  // namespace natmod
