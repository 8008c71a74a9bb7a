#include "natmod/freemodel.hpp"

#include <memory>

namespace natmod {

namespace {

Key closed_at(const NaturalModel& m, const Key& ctx, const Key& O) {
    return m.subst_ty(m.to_terminal(ctx), O);
}

}  // namespace

ExtendedByTerm::ExtendedByTerm(ModelPtr base, Key O) : m_(std::move(base)), O_(std::move(O)) {
    if (!m_->is_type(m_->empty(), O_)) throw MalformedInput(O_ + " is not a closed type of " + m_->name());
}

Key ExtendedByTerm::x() const {
    const Key E = m_->empty();
    return m_->ext(E, closed_at(*m_, E, O_)).var;
}

Key ExtendedByTerm::underlying(const Key& X) const {
    auto it = under_.find(X);
    if (it != under_.end()) return it->second;
    auto parts = split_tup(X);
    if (parts.empty()) throw MalformedInput("not a context: " + X);
    Key U = m_->ext(parts[0], closed_at(*m_, parts[0], O_)).extended;
    for (std::size_t i = 1; i < parts.size(); ++i) U = m_->ext(U, parts[i]).extended;
    under_[X] = U;
    return U;
}

Key ExtendedByTerm::to_base(const Key& X) const {
    auto parts = split_tup(X);
    Key U = m_->ext(parts[0], closed_at(*m_, parts[0], O_)).extended;
    Key p = m_->identity(U);
    for (std::size_t i = 1; i < parts.size(); ++i) {
        auto e = m_->ext(U, parts[i]);
        p = m_->compose(p, e.proj);
        U = e.extended;
    }
    return p;
}

namespace {

// U_X -> empty . O
Key structure_map(const ExtendedByTerm& c, const Key& X) {
    const auto& m = c.base();
    Key G = c.gamma(X);
    return m.compose(canonical_pullback(m, m.to_terminal(G), c.basic_type()), c.to_base(X));
}

}  // namespace

std::vector<Key> ExtendedByTerm::objects(int bound) const {
    std::vector<Key> out;
    for (int n = 0; n <= bound; ++n)
        for (const auto& G : m_->objects(bound - n)) {
            if (n == 0) {
                out.push_back(tup({G}));
                continue;
            }
            Key U0 = m_->ext(G, closed_at(*m_, G, O_)).extended;
            std::vector<std::pair<std::vector<Key>, Key>> layer;
            for (const auto& A : m_->ty(U0))
                if (!collapse(tup({G}), A)) layer.push_back({{G, A}, m_->ext(U0, A).extended});
            for (int i = 1; i < n; ++i) {
                std::vector<std::pair<std::vector<Key>, Key>> next;
                for (const auto& [ks, U] : layer)
                    for (const auto& A : m_->ty(U)) {
                        auto k2 = ks;
                        k2.push_back(A);
                        next.push_back({k2, m_->ext(U, A).extended});
                    }
                layer = std::move(next);
            }
            for (const auto& [ks, U] : layer) out.push_back(tup(ks));
        }
    return out;
}

std::vector<Key> ExtendedByTerm::hom(const Key& src, const Key& dst) const {
    Key a = structure_map(*this, src), b = structure_map(*this, dst);
    std::vector<Key> out;
    for (const auto& g : m_->hom(underlying(src), underlying(dst)))
        if (m_->compose(b, g) == a) out.push_back(mor_key(src, dst, g));
    return out;
}

Key ExtendedByTerm::compose(const Key& g, const Key& f) const {
    auto fp = mor_parts(f), gp = mor_parts(g);
    if (fp[1] != gp[0]) throw Undefined("compose: " + g + " . " + f);
    return mor_key(fp[0], gp[1], m_->compose(gp[2], fp[2]));
}

Key ExtendedByTerm::identity(const Key& x) const { return mor_key(x, x, m_->identity(underlying(x))); }

Key ExtendedByTerm::empty() const { return tup({m_->empty()}); }

Key ExtendedByTerm::to_terminal(const Key& ctx) const { return mor_key(ctx, empty(), structure_map(*this, ctx)); }

std::vector<Key> ExtendedByTerm::ty(const Key& ctx) const { return m_->ty(underlying(ctx)); }
std::vector<Key> ExtendedByTerm::tm(const Key& ctx) const { return m_->tm(underlying(ctx)); }
Key ExtendedByTerm::type_of(const Key& ctx, const Key& a) const { return m_->type_of(underlying(ctx), a); }
Key ExtendedByTerm::subst_ty(const Key& s, const Key& A) const { return m_->subst_ty(inner(s), A); }
Key ExtendedByTerm::subst_tm(const Key& s, const Key& a) const { return m_->subst_tm(inner(s), a); }
bool ExtendedByTerm::is_type(const Key& ctx, const Key& A) const { return m_->is_type(underlying(ctx), A); }
bool ExtendedByTerm::is_term(const Key& ctx, const Key& a) const { return m_->is_term(underlying(ctx), a); }

std::optional<Key> ExtendedByTerm::collapse(const Key& ctx, const Key& A) const {
    auto parts = split_tup(ctx);
    if (parts.size() != 1) return std::nullopt;
    const Key& G = parts[0];
    Key pO = m_->ext(G, closed_at(*m_, G, O_)).proj;
    for (const auto& A1 : m_->ty(G))
        if (m_->subst_ty(pO, A1) == A) return A1;
    return std::nullopt;
}

ExtData ExtendedByTerm::ext(const Key& ctx, const Key& A) const {
    if (!is_type(ctx, A)) throw Undefined(A + " is not a type over " + ctx);
    if (auto A1 = collapse(ctx, A)) {
        const Key G = gamma(ctx);
        auto eA = m_->ext(G, *A1);
        const Key X2 = tup({eA.extended});
        Key proj = canonical_pullback(*m_, eA.proj, closed_at(*m_, G, O_));
        auto eO = m_->ext(eA.extended, closed_at(*m_, eA.extended, O_));
        return {X2, mor_key(X2, ctx, proj), m_->subst_tm(eO.proj, eA.var)};
    }
    auto parts = split_tup(ctx);
    parts.push_back(A);
    const Key X2 = tup(parts);
    auto e = m_->ext(underlying(ctx), A);
    under_[X2] = e.extended;
    return {X2, mor_key(X2, ctx, e.proj), e.var};
}

std::optional<Key> ExtendedByTerm::pair(const Key& s, const Key& A, const Key& a) const {
    const Key X = cod(s), D = dom(s);
    const Key X2 = ext(X, A).extended;
    if (auto A1 = collapse(X, A)) {
        const Key G = gamma(X);
        auto eO = m_->ext(G, closed_at(*m_, G, O_));
        Key g1 = indsub(*m_, m_->compose(eO.proj, inner(s)), a, *A1);
        Key GA = m_->ext(G, *A1).extended;
        Key g = indsub(*m_, g1, m_->subst_tm(inner(s), eO.var), closed_at(*m_, GA, O_));
        return mor_key(D, X2, g);
    }
    return mor_key(D, X2, indsub(*m_, inner(s), a, A));
}

std::shared_ptr<const ExtendedByTerm> extend_by_term(ModelPtr m, const Key& O) {
    return std::make_shared<ExtendedByTerm>(std::move(m), O);
}

NMorphism inclusion(std::shared_ptr<const ExtendedByTerm> e) {
    ModelPtr m = e->base_ptr();
    NMorphism I;
    I.src = m;
    I.tgt = e;
    I.name = "I";
    auto pO = [m, e](const Key& G) { return m->ext(G, closed_at(*m, G, e->basic_type())).proj; };
    I.obj = [](const Key& G) { return tup({G}); };
    I.mor = [m, e](const Key& s) {
        Key G = m->cod(s);
        return mor_key(tup({m->dom(s)}), tup({G}), canonical_pullback(*m, s, closed_at(*m, G, e->basic_type())));
    };
    I.ty = [m, pO](const Key& G, const Key& A) { return m->subst_ty(pO(G), A); };
    I.tm = [m, pO](const Key& G, const Key& a) { return m->subst_tm(pO(G), a); };
    return I;
}

namespace {

struct TermChain {
    std::vector<Key> Us;     // U_0 = Gamma.O[t], ..., U_n in the source base
    std::vector<Key> projs;  // U_i -> U_(i-1), i >= 1
    std::vector<Key> qs;     // q_Ai over U_i, i >= 1
    std::vector<Key> Ys;     // Y_0 = F Gamma, ..., Y_n in the target
    std::vector<Key> ws;     // w_i : Y_i -> F(U_i)
};

}  // namespace

NMorphism term_sharp(std::shared_ptr<const ExtendedByTerm> e, const NMorphism& F, const Key& o) {
    ModelPtr D = F.tgt;
    ModelPtr m = e->base_ptr();
    const Key O = e->basic_type();
    auto cache = std::make_shared<std::map<Key, TermChain>>();
    auto chain = [D, m, F, o, O, cache](const Key& X) -> const TermChain& {
        auto it = cache->find(X);
        if (it != cache->end()) return it->second;
        auto parts = split_tup(X);
        const Key& G = parts[0];
        TermChain c;
        Key Og = closed_at(*m, G, O);
        c.Us.push_back(m->ext(G, Og).extended);
        Key FG = F.obj(G);
        Key FO = F.ty(G, Og);
        c.Ys.push_back(FG);
        c.ws.push_back(section(*D, FG, FO, D->subst_tm(D->to_terminal(FG), o)));
        for (std::size_t i = 1; i < parts.size(); ++i) {
            auto eu = m->ext(c.Us.back(), parts[i]);
            Key B = F.ty(c.Us.back(), parts[i]);
            Key w = c.ws.back();
            auto ey = D->ext(c.Ys.back(), D->subst_ty(w, B));
            c.Us.push_back(eu.extended);
            c.projs.push_back(eu.proj);
            c.qs.push_back(eu.var);
            c.Ys.push_back(ey.extended);
            c.ws.push_back(canonical_pullback(*D, w, B));
        }
        return cache->emplace(X, std::move(c)).first->second;
    };
    NMorphism S;
    S.src = e;
    S.tgt = D;
    S.name = F.name + "#";
    S.obj = [chain](const Key& X) { return chain(X).Ys.back(); };
    S.ty = [D, F, chain](const Key& X, const Key& A) {
        const auto& c = chain(X);
        return D->subst_ty(c.ws.back(), F.ty(c.Us.back(), A));
    };
    S.tm = [D, F, chain](const Key& X, const Key& a) {
        const auto& c = chain(X);
        return D->subst_tm(c.ws.back(), F.tm(c.Us.back(), a));
    };
    S.mor = [D, m, e, F, O, chain](const Key& t) {
        const Key X1 = e->dom(t), X = e->cod(t);
        const auto& src = chain(X1);
        const auto& dst = chain(X);
        const Key tau = e->inner(t);
        const std::size_t n = dst.projs.size();
        // suffix[i] : U_n -> U_i
        std::vector<Key> suffix(n + 1);
        suffix[n] = m->identity(dst.Us[n]);
        for (std::size_t i = n; i > 0; --i) suffix[i - 1] = m->compose(dst.projs[i - 1], suffix[i]);
        const Key G = e->gamma(X);
        Key pO = m->ext(G, closed_at(*m, G, O)).proj;
        Key g = D->compose(F.mor(m->compose(pO, m->compose(suffix[0], tau))), src.ws.back());
        for (std::size_t i = 1; i <= n; ++i) {
            Key a = m->subst_tm(tau, m->subst_tm(suffix[i], dst.qs[i - 1]));
            Key Fa = D->subst_tm(src.ws.back(), F.tm(src.Us.back(), a));
            Key T = D->subst_ty(dst.ws[i - 1], F.ty(dst.Us[i - 1], split_tup(X)[i]));
            g = indsub(*D, g, Fa, T);
        }
        return g;
    };
    return S;
}

NMorphism substitution_morphism(std::shared_ptr<const ExtendedByTerm> e, const Key& o) {
    auto S = term_sharp(e, identity_morphism(e->base_ptr()), o);
    S.name = "S_" + o;
    return S;
}

NMorphism extend_term_universal(std::shared_ptr<const ExtendedByTerm> e, const NMorphism& F, const Key& o) {
    return term_sharp(e, F, o);
}

NMorphism term_functor(std::shared_ptr<const ExtendedByTerm> src, std::shared_ptr<const ExtendedByTerm> tgt,
                       const NMorphism& F) {
    const Key E = src->base().empty();
    if (F.ty(E, src->basic_type()) != tgt->basic_type())
        throw MalformedInput("target is not extended by the image of " + src->basic_type());
    auto G = compose_morphisms(inclusion(tgt), F);
    auto out = term_sharp(src, G, tgt->x());
    out.name = F.name + "_tm";
    return out;
}

}  // namespace natmod
