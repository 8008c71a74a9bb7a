#include "natmod/freemodel.hpp"

#include <memory>

namespace natmod {

namespace {

bool is_tree_term(const NaturalModel& m, const Key& ctx, const Key& t) {
    try {
        auto v = split_tup(t);
        if (v.size() == 2 && v[0] == "l") return m.is_term(ctx, v[1]);
        if (v.size() != 4 || v[0] != "n" || !is_tree_term(m, ctx, v[1])) return false;
        Key T1 = tree_type_of(m, ctx, v[1]);
        if (!is_tree_type(m, tree_repr(m, ctx, T1).extended, v[3])) return false;
        Key T2 = tree_subst(m, tree_section(m, ctx, T1, v[1]), v[3]);
        return is_tree_term(m, ctx, v[2]) && tree_type_of(m, ctx, v[2]) == T2;
    } catch (const std::exception&) {
        return false;
    }
}

}  // namespace

ExtendedBySigma::ExtendedBySigma(ModelPtr base, int max_leaves) : m_(std::move(base)), L_(max_leaves) {
    if (L_ < 1) throw MalformedInput("trees need at least one leaf");
}

Key ExtendedBySigma::underlying(const Key& X) const {
    auto it = under_.find(X);
    if (it != under_.end()) return it->second;
    auto parts = split_tup(X);
    if (parts.empty()) throw MalformedInput("not a context: " + X);
    Key U = parts[0];
    for (std::size_t i = 1; i < parts.size(); ++i) U = tree_repr(*m_, U, parts[i]).extended;
    under_[X] = U;
    return U;
}

std::vector<Key> ExtendedBySigma::objects(int bound) const {
    std::vector<Key> out;
    for (int j = 0; j <= bound; ++j)
        for (const auto& G : m_->objects(bound - j)) {
            if (j == 0) {
                out.push_back(tup({G}));
                continue;
            }
            // sequences of trees with j leaves in total, the first one a node
            struct Partial {
                std::vector<Key> parts;
                Key U;
                int left;
            };
            std::vector<Partial> todo{{{G}, G, j}};
            while (!todo.empty()) {
                auto p = std::move(todo.back());
                todo.pop_back();
                if (p.left == 0) {
                    out.push_back(tup(p.parts));
                    continue;
                }
                for (const auto& T : type_trees(*m_, p.U, std::min(L_, p.left))) {
                    if (p.parts.size() == 1 && is_leaf(T)) continue;
                    auto parts = p.parts;
                    parts.push_back(T);
                    todo.push_back({parts, tree_repr(*m_, p.U, T).extended, p.left - leaf_count(T)});
                }
            }
        }
    return out;
}

std::vector<Key> ExtendedBySigma::hom(const Key& src, const Key& dst) const {
    std::vector<Key> out;
    for (const auto& g : m_->hom(underlying(src), underlying(dst))) out.push_back(mor_key(src, dst, g));
    return out;
}

Key ExtendedBySigma::compose(const Key& g, const Key& f) const {
    auto fp = mor_parts(f), gp = mor_parts(g);
    if (fp[1] != gp[0]) throw Undefined("compose: " + g + " . " + f);
    return mor_key(fp[0], gp[1], m_->compose(gp[2], fp[2]));
}

Key ExtendedBySigma::identity(const Key& x) const { return mor_key(x, x, m_->identity(underlying(x))); }
Key ExtendedBySigma::empty() const { return tup({m_->empty()}); }
Key ExtendedBySigma::to_terminal(const Key& ctx) const {
    return mor_key(ctx, empty(), m_->to_terminal(underlying(ctx)));
}

std::vector<Key> ExtendedBySigma::ty(const Key& ctx) const { return type_trees(*m_, underlying(ctx), L_); }

std::vector<Key> ExtendedBySigma::tm(const Key& ctx) const {
    const Key U = underlying(ctx);
    std::vector<Key> out;
    for (const auto& T : ty(ctx))
        for (const auto& t : term_trees(*m_, U, T)) out.push_back(t);
    return out;
}

Key ExtendedBySigma::type_of(const Key& ctx, const Key& a) const { return tree_type_of(*m_, underlying(ctx), a); }
Key ExtendedBySigma::subst_ty(const Key& s, const Key& A) const { return tree_subst(*m_, inner(s), A); }
Key ExtendedBySigma::subst_tm(const Key& s, const Key& a) const { return tree_subst_tm(*m_, inner(s), a); }

ExtData ExtendedBySigma::ext(const Key& ctx, const Key& A) const {
    if (!is_type(ctx, A)) throw Undefined(A + " is not a type over " + ctx);
    auto parts = split_tup(ctx);
    if (parts.size() == 1 && is_leaf(A)) {
        auto e = m_->ext(parts[0], split_tup(A)[1]);
        Key X2 = tup({e.extended});
        return {X2, mor_key(X2, ctx, e.proj), tree_leaf(e.var)};
    }
    auto r = tree_repr(*m_, underlying(ctx), A);
    parts.push_back(A);
    Key X2 = tup(parts);
    under_[X2] = r.extended;
    return {X2, mor_key(X2, ctx, r.proj), r.var};
}

std::optional<Key> ExtendedBySigma::pair(const Key& s, const Key& A, const Key& a) const {
    Key X2 = ext(cod(s), A).extended;
    return mor_key(dom(s), X2, tree_indsub(*m_, inner(s), a, A));
}

bool ExtendedBySigma::is_type(const Key& ctx, const Key& A) const { return is_tree_type(*m_, underlying(ctx), A); }
bool ExtendedBySigma::is_term(const Key& ctx, const Key& a) const { return is_tree_term(*m_, underlying(ctx), a); }

SigmaStructure ExtendedBySigma::sigma() const {
    SigmaStructure s;
    s.sigma = [](const Key&, const Key& A, const Key& B) { return tree_node(A, B); };
    s.pair = [](const Key&, const Key&, const Key& B, const Key& a, const Key& b) { return term_node(a, b, B); };
    return s;
}

std::shared_ptr<const ExtendedBySigma> extend_by_sigma(ModelPtr m, int max_leaves) {
    return std::make_shared<ExtendedBySigma>(std::move(m), max_leaves);
}

NMorphism sigma_inclusion(std::shared_ptr<const ExtendedBySigma> e) {
    ModelPtr m = e->base_ptr();
    NMorphism I;
    I.src = m;
    I.tgt = e;
    I.name = "I";
    I.obj = [](const Key& G) { return tup({G}); };
    I.mor = [m](const Key& s) { return mor_key(tup({m->dom(s)}), tup({m->cod(s)}), s); };
    I.ty = [](const Key&, const Key& A) { return tree_leaf(A); };
    I.tm = [](const Key&, const Key& a) { return tree_leaf(a); };
    return I;
}

// ---- summing trees in a model with dependent sums ----

namespace {

class Summer {
public:
    Summer(ModelPtr d, SigmaStructure s) : d_(std::move(d)), s_(std::move(s)) {}

    Key hat(const Key& ctx, const Key& U) {
        auto it = hat_.find({ctx, U});
        if (it != hat_.end()) return it->second;
        auto v = split_tup(U);
        Key out;
        if (v[0] == "l") {
            out = v[1];
        } else {
            Key A = hat(ctx, v[1]);
            Key C1 = tree_repr(*d_, ctx, v[1]).extended;
            Key B = d_->subst_ty(theta(ctx, v[1]), hat(C1, v[2]));
            out = s_.sigma(ctx, A, B);
        }
        hat_[{ctx, U}] = out;
        return out;
    }

    // ctx.U -> ctx.hat(U)
    Key thinv(const Key& ctx, const Key& U) {
        auto it = thinv_.find({ctx, U});
        if (it != thinv_.end()) return it->second;
        auto v = split_tup(U);
        const auto& d = *d_;
        Key out;
        if (v[0] == "l") {
            out = d.identity(d.ext(ctx, v[1]).extended);
        } else {
            auto eU = tree_repr(d, ctx, U);
            auto eU1 = tree_repr(d, ctx, v[1]);
            auto eU2 = tree_repr(d, eU1.extended, v[2]);
            Key A = hat(ctx, v[1]);
            auto eA = d.ext(ctx, A);
            Key g1 = thinv(ctx, v[1]);
            Key H = hat(eU1.extended, v[2]);
            auto eH = d.ext(eU1.extended, H);
            Key g2 = thinv(eU1.extended, v[2]);
            Key B = d.subst_ty(theta(ctx, v[1]), H);
            Key a = d.subst_tm(d.compose(g1, eU2.proj), eA.var);
            Key b = d.subst_tm(g2, eH.var);
            Key Ap = d.subst_ty(eU.proj, A);
            Key Bp = d.subst_ty(canonical_pullback(d, eU.proj, A), B);
            Key pr = s_.pair(eU.extended, Ap, Bp, a, b);
            out = indsub(d, eU.proj, pr, s_.sigma(ctx, A, B));
        }
        thinv_[{ctx, U}] = out;
        return out;
    }

    // ctx.hat(U) -> ctx.U
    Key theta(const Key& ctx, const Key& U) {
        auto it = theta_.find({ctx, U});
        if (it != theta_.end()) return it->second;
        Key out;
        if (is_leaf(U)) {
            out = d_->identity(d_->ext(ctx, split_tup(U)[1]).extended);
        } else {
            auto inv = inverse(*d_, thinv(ctx, U));
            if (!inv) throw Undefined("summing " + U + " over " + ctx + " is not invertible");
            out = *inv;
        }
        theta_[{ctx, U}] = out;
        return out;
    }

    Key hat_tm(const Key& ctx, const Key& U, const Key& t) {
        auto v = split_tup(U), w = split_tup(t);
        if (v[0] == "l") return w[1];
        Key a = hat_tm(ctx, v[1], w[1]);
        Key U2 = tree_subst(*d_, tree_section(*d_, ctx, v[1], w[1]), v[2]);
        Key b = hat_tm(ctx, U2, w[2]);
        Key A = hat(ctx, v[1]);
        Key C1 = tree_repr(*d_, ctx, v[1]).extended;
        Key B = d_->subst_ty(theta(ctx, v[1]), hat(C1, v[2]));
        return s_.pair(ctx, A, B, a, b);
    }

    const NaturalModel& d() const { return *d_; }

private:
    ModelPtr d_;
    SigmaStructure s_;
    std::map<std::pair<Key, Key>, Key> hat_, thinv_, theta_;
};

// F applied leafwise; T is a tree over the source context G.
Key map_tree(const NMorphism& F, const Key& G, const Key& T) {
    auto v = split_tup(T);
    if (v[0] == "l") return tree_leaf(F.ty(G, v[1]));
    Key G1 = tree_repr(*F.src, G, v[1]).extended;
    return tree_node(map_tree(F, G, v[1]), map_tree(F, G1, v[2]));
}

Key map_term(const NMorphism& F, const Key& G, const Key& t) {
    auto v = split_tup(t);
    if (v[0] == "l") return tree_leaf(F.tm(G, v[1]));
    Key T1 = tree_type_of(*F.src, G, v[1]);
    Key G1 = tree_repr(*F.src, G, T1).extended;
    return term_node(map_term(F, G, v[1]), map_term(F, G, v[2]), map_tree(F, G1, v[3]));
}

struct SigmaChain {
    Key Y, U;     // target context, source base context
    Key w, winv;  // Y <-> F(U)
};

}  // namespace

Key sum_tree(const NaturalModel& d, const SigmaStructure& s, const Key& ctx, const Key& T) {
    ModelPtr alias(std::shared_ptr<const NaturalModel>{}, &d);
    Summer sum(alias, s);
    return sum.hat(ctx, T);
}

NMorphism sigma_sharp(std::shared_ptr<const ExtendedBySigma> e, const NMorphism& F, const SigmaStructure& s) {
    ModelPtr D = F.tgt;
    ModelPtr m = e->base_ptr();
    auto sum = std::make_shared<Summer>(D, s);
    auto cache = std::make_shared<std::map<Key, SigmaChain>>();
    auto chain = [D, m, F, sum, cache](const Key& X) -> const SigmaChain& {
        auto it = cache->find(X);
        if (it != cache->end()) return it->second;
        auto parts = split_tup(X);
        SigmaChain c;
        c.U = parts[0];
        c.Y = F.obj(c.U);
        c.w = c.winv = D->identity(c.Y);
        for (std::size_t i = 1; i < parts.size(); ++i) {
            Key FT = map_tree(F, c.U, parts[i]);
            Key Ut = tree_subst(*D, c.w, FT);
            Key H = sum->hat(c.Y, Ut);
            auto ey = D->ext(c.Y, H);
            Key w = D->compose(tree_pullback(*D, c.w, FT), sum->theta(c.Y, Ut));
            Key winv = D->compose(sum->thinv(c.Y, Ut), tree_pullback(*D, c.winv, Ut));
            c.Y = ey.extended;
            c.w = w;
            c.winv = winv;
            c.U = tree_repr(*m, c.U, parts[i]).extended;
        }
        return cache->emplace(X, std::move(c)).first->second;
    };
    NMorphism S;
    S.src = e;
    S.tgt = D;
    S.name = F.name + "#";
    S.obj = [chain](const Key& X) { return chain(X).Y; };
    S.mor = [D, e, F, chain](const Key& t) {
        const auto& src = chain(e->dom(t));
        const auto& dst = chain(e->cod(t));
        return D->compose(dst.winv, D->compose(F.mor(e->inner(t)), src.w));
    };
    S.ty = [D, F, sum, chain](const Key& X, const Key& T) {
        const auto& c = chain(X);
        return sum->hat(c.Y, tree_subst(*D, c.w, map_tree(F, c.U, T)));
    };
    S.tm = [D, m, F, sum, chain](const Key& X, const Key& t) {
        const auto& c = chain(X);
        Key T = tree_type_of(*m, c.U, t);
        return sum->hat_tm(c.Y, tree_subst(*D, c.w, map_tree(F, c.U, T)), tree_subst_tm(*D, c.w, map_term(F, c.U, t)));
    };
    return S;
}

NMorphism tree_summation(std::shared_ptr<const ExtendedBySigma> e, const SigmaStructure& s) {
    auto S = sigma_sharp(e, identity_morphism(e->base_ptr()), s);
    S.name = "S";
    return S;
}

}  // namespace natmod
