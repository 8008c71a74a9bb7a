#pragma once

#include "natmod/fincat.hpp"
#include "natmod/natmodel.hpp"

#include <memory>

namespace natmod {

// Free model on a family of basic types I = {0..n-1}. Contexts are words over I in
// (Fin/I)^op, types are the indices "0".."n-1", and terms over u are the positions of u.
class TermModel : public NaturalModel {
public:
    TermModel(int index_size, int bound) : base_(index_size), bound_(bound) {}

    const FinSliceOp& base() const { return base_; }
    int index_size() const { return base_.index_size(); }

    std::vector<Key> objects(int bound) const override { return base_.objects(bound); }
    std::vector<Key> hom(const Key& src, const Key& dst) const override { return base_.hom(src, dst); }
    Key compose(const Key& g, const Key& f) const override { return base_.compose(g, f); }
    Key identity(const Key& x) const override { return base_.identity(x); }
    Key dom(const Key& f) const override { return base_.dom(f); }
    Key cod(const Key& f) const override { return base_.cod(f); }

    Key empty() const override { return "[]"; }
    std::vector<Key> ty(const Key& ctx) const override;
    std::vector<Key> tm(const Key& ctx) const override;
    Key type_of(const Key& ctx, const Key& a) const override;
    Key subst_ty(const Key& s, const Key& A) const override;
    Key subst_tm(const Key& s, const Key& a) const override;
    ExtData ext(const Key& ctx, const Key& A) const override;
    std::optional<Key> pair(const Key& s, const Key& A, const Key& a) const override;
    bool is_type(const Key& ctx, const Key& A) const override;
    bool is_term(const Key& ctx, const Key& a) const override;

    int bound() const override { return bound_; }
    std::string name() const override { return "term_model(" + std::to_string(index_size()) + ")"; }

private:
    FinSliceOp base_;
    int bound_;
};

std::shared_ptr<const TermModel> term_model(int index_size, int bound);

// Subsingleton model over finite sets: contexts "0".."b", a type over n is a predicate
// n -> 2 written as a bit list, and the only term is the everywhere-true predicate.
// Extension is comprehension; it has unit, dependent sums and dependent products.
class FamProp : public NaturalModel {
public:
    explicit FamProp(int bound) : bound_(bound < 1 ? 1 : bound) {}

    std::vector<Key> objects(int bound) const override;
    std::vector<Key> hom(const Key& src, const Key& dst) const override;
    Key compose(const Key& g, const Key& f) const override;
    Key identity(const Key& x) const override;
    Key dom(const Key& f) const override { return mor_parts(f)[0]; }
    Key cod(const Key& f) const override { return mor_parts(f)[1]; }

    Key empty() const override { return "1"; }
    std::vector<Key> ty(const Key& ctx) const override;
    std::vector<Key> tm(const Key& ctx) const override;
    Key type_of(const Key& ctx, const Key& a) const override;
    Key subst_ty(const Key& s, const Key& A) const override;
    Key subst_tm(const Key& s, const Key& a) const override { return subst_ty(s, a); }
    ExtData ext(const Key& ctx, const Key& A) const override;
    std::optional<Key> pair(const Key& s, const Key& A, const Key& a) const override;
    bool is_type(const Key& ctx, const Key& A) const override;
    bool is_term(const Key& ctx, const Key& a) const override;

    int bound() const override { return bound_; }
    std::string name() const override { return "fam_prop"; }

    UnitStructure unit() const { return {"[1]", "[1]"}; }
    SigmaStructure sigma() const;
    PiStructure pi() const;

    static Key function(int dom, int cod, const std::vector<int>& fn);

private:
    int bound_;
};

std::shared_ptr<const FamProp> fam_prop(int bound);

// Forwards everything to an inner model; subclasses override single operations.
class ModelView : public NaturalModel {
public:
    explicit ModelView(ModelPtr inner) : inner_(std::move(inner)) {}

    std::vector<Key> objects(int bound) const override { return inner_->objects(bound); }
    std::vector<Key> hom(const Key& src, const Key& dst) const override { return inner_->hom(src, dst); }
    Key compose(const Key& g, const Key& f) const override { return inner_->compose(g, f); }
    Key identity(const Key& x) const override { return inner_->identity(x); }
    Key dom(const Key& f) const override { return inner_->dom(f); }
    Key cod(const Key& f) const override { return inner_->cod(f); }
    Key empty() const override { return inner_->empty(); }
    Key to_terminal(const Key& ctx) const override { return inner_->to_terminal(ctx); }
    std::vector<Key> ty(const Key& ctx) const override { return inner_->ty(ctx); }
    std::vector<Key> tm(const Key& ctx) const override { return inner_->tm(ctx); }
    Key type_of(const Key& ctx, const Key& a) const override { return inner_->type_of(ctx, a); }
    Key subst_ty(const Key& s, const Key& A) const override { return inner_->subst_ty(s, A); }
    Key subst_tm(const Key& s, const Key& a) const override { return inner_->subst_tm(s, a); }
    ExtData ext(const Key& ctx, const Key& A) const override { return inner_->ext(ctx, A); }
    std::optional<Key> pair(const Key& s, const Key& A, const Key& a) const override { return inner_->pair(s, A, a); }
    bool is_type(const Key& ctx, const Key& A) const override { return inner_->is_type(ctx, A); }
    bool is_term(const Key& ctx, const Key& a) const override { return inner_->is_term(ctx, a); }
    int bound() const override { return inner_->bound(); }
    std::string name() const override { return inner_->name(); }

protected:
    ModelPtr inner_;
};

// The identity classifier on the contexts of m: one type "*", one term "*", and
// Gamma.* = Gamma with identity projection.
class IdentityClassifier : public ModelView {
public:
    using ModelView::ModelView;
    std::vector<Key> ty(const Key&) const override { return {"*"}; }
    std::vector<Key> tm(const Key&) const override { return {"*"}; }
    Key type_of(const Key&, const Key&) const override { return "*"; }
    Key subst_ty(const Key&, const Key&) const override { return "*"; }
    Key subst_tm(const Key&, const Key&) const override { return "*"; }
    ExtData ext(const Key& ctx, const Key& A) const override;
    std::optional<Key> pair(const Key& s, const Key&, const Key&) const override { return s; }
    bool is_type(const Key&, const Key& A) const override { return A == "*"; }
    bool is_term(const Key&, const Key& a) const override { return a == "*"; }
    std::string name() const override { return "id_classifier(" + inner_->name() + ")"; }
};

}  // namespace natmod
