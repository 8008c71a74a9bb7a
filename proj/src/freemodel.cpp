#include "natmod/freemodel.hpp"

#include <memory>

namespace natmod {

// ---- trees ----

Key tree_leaf(const Key& x) { return tup({"l", x}); }
Key tree_node(const Key& T1, const Key& T2) { return tup({"n", T1, T2}); }
Key term_node(const Key& t1, const Key& t2, const Key& T2) { return tup({"n", t1, t2, T2}); }

bool is_leaf(const Key& T) { return starts_with(T, "(l,"); }

namespace {

std::vector<Key> tree_parts(const Key& T) {
    auto v = split_tup(T);
    if (v.empty() || (v[0] == "l" && v.size() != 2) || (v[0] == "n" && v.size() != 3 && v.size() != 4) ||
        (v[0] != "l" && v[0] != "n"))
        throw MalformedInput("not a tree: " + T);
    return v;
}

}  // namespace

int leaf_count(const Key& T) {
    auto v = tree_parts(T);
    if (v[0] == "l") return 1;
    return leaf_count(v[1]) + leaf_count(v[2]);
}

bool is_tree_type(const NaturalModel& m, const Key& ctx, const Key& T) {
    try {
        auto v = tree_parts(T);
        if (v[0] == "l") return m.is_type(ctx, v[1]);
        if (v.size() != 3 || !is_tree_type(m, ctx, v[1])) return false;
        return is_tree_type(m, tree_repr(m, ctx, v[1]).extended, v[2]);
    } catch (const std::exception&) {
        return false;
    }
}

ExtData tree_repr(const NaturalModel& m, const Key& ctx, const Key& T) {
    auto v = tree_parts(T);
    if (v[0] == "l") {
        auto e = m.ext(ctx, v[1]);
        return {e.extended, e.proj, tree_leaf(e.var)};
    }
    auto e1 = tree_repr(m, ctx, v[1]);
    auto e2 = tree_repr(m, e1.extended, v[2]);
    Key p = m.compose(e1.proj, e2.proj);
    Key t1 = tree_subst_tm(m, e2.proj, e1.var);
    Key T2 = tree_subst(m, tree_pullback(m, p, v[1]), v[2]);
    return {e2.extended, p, term_node(t1, e2.var, T2)};
}

Key tree_subst(const NaturalModel& m, const Key& s, const Key& T) {
    auto v = tree_parts(T);
    if (v[0] == "l") return tree_leaf(m.subst_ty(s, v[1]));
    return tree_node(tree_subst(m, s, v[1]), tree_subst(m, tree_pullback(m, s, v[1]), v[2]));
}

Key tree_subst_tm(const NaturalModel& m, const Key& s, const Key& t) {
    auto v = tree_parts(t);
    if (v[0] == "l") return tree_leaf(m.subst_tm(s, v[1]));
    Key T1 = tree_type_of(m, m.cod(s), v[1]);
    return term_node(tree_subst_tm(m, s, v[1]), tree_subst_tm(m, s, v[2]),
                     tree_subst(m, tree_pullback(m, s, T1), v[3]));
}

Key tree_type_of(const NaturalModel& m, const Key& ctx, const Key& t) {
    auto v = tree_parts(t);
    if (v[0] == "l") return tree_leaf(m.type_of(ctx, v[1]));
    if (v.size() != 4) throw MalformedInput("not a term tree: " + t);
    return tree_node(tree_type_of(m, ctx, v[1]), v[3]);
}

Key tree_indsub(const NaturalModel& m, const Key& s, const Key& t, const Key& T) {
    auto v = tree_parts(T);
    auto w = tree_parts(t);
    if (v[0] != w[0]) throw Undefined("term tree " + t + " does not have the shape of " + T);
    if (v[0] == "l") return indsub(m, s, w[1], v[1]);
    Key g1 = tree_indsub(m, s, w[1], v[1]);
    return tree_indsub(m, g1, w[2], v[2]);
}

Key tree_section(const NaturalModel& m, const Key& ctx, const Key& T, const Key& t) {
    return tree_indsub(m, m.identity(ctx), t, T);
}

Key tree_pullback(const NaturalModel& m, const Key& s, const Key& T) {
    if (is_leaf(T)) return canonical_pullback(m, s, tree_parts(T)[1]);
    Key Ts = tree_subst(m, s, T);
    auto e = tree_repr(m, m.dom(s), Ts);
    return tree_indsub(m, m.compose(s, e.proj), e.var, T);
}

std::vector<Key> type_trees(const NaturalModel& m, const Key& ctx, int max_leaves) {
    std::vector<Key> out;
    if (max_leaves < 1) return out;
    for (const auto& A : m.ty(ctx)) out.push_back(tree_leaf(A));
    if (max_leaves < 2) return out;
    for (const auto& T1 : type_trees(m, ctx, max_leaves - 1)) {
        Key next = tree_repr(m, ctx, T1).extended;
        for (const auto& T2 : type_trees(m, next, max_leaves - leaf_count(T1))) out.push_back(tree_node(T1, T2));
    }
    return out;
}

std::vector<Key> term_trees(const NaturalModel& m, const Key& ctx, const Key& T) {
    auto v = tree_parts(T);
    std::vector<Key> out;
    if (v[0] == "l") {
        for (const auto& a : m.tm(ctx))
            if (m.type_of(ctx, a) == v[1]) out.push_back(tree_leaf(a));
        return out;
    }
    for (const auto& t1 : term_trees(m, ctx, v[1])) {
        Key T2 = tree_subst(m, tree_section(m, ctx, v[1], t1), v[2]);
        for (const auto& t2 : term_trees(m, ctx, T2)) out.push_back(term_node(t1, t2, v[2]));
    }
    return out;
}

// ---- swap isomorphisms ----

SwapIso swap_iso(const NaturalModel& m, const Key& ctx, const Key& O, const Key& A) {
    auto eO = m.ext(ctx, O);
    Key A1 = m.subst_ty(eO.proj, A);
    auto eOA = m.ext(eO.extended, A1);
    auto eA = m.ext(ctx, A);
    Key O1 = m.subst_ty(eA.proj, O);
    auto eAO = m.ext(eA.extended, O1);
    Key g1 = indsub(m, m.compose(eO.proj, eOA.proj), eOA.var, A);
    Key g = indsub(m, g1, m.subst_tm(eOA.proj, eO.var), O1);
    return {eOA.extended, eAO.extended, g};
}

// ---- initial morphism ----

namespace {

struct Chain {
    Key Y;
    std::vector<Key> steps;  // type added at each step, over the prefix
    std::vector<Key> vars;   // every variable, weakened to Y
};

// Iterated extension by closed types, as in F(A,u) = O_u0 . ... . O_u(n-1).
Chain closed_chain(const NaturalModel& d, const std::vector<Key>& closed) {
    Chain c{d.empty(), {}, {}};
    for (const auto& O : closed) {
        Key T = d.subst_ty(d.to_terminal(c.Y), O);
        auto e = d.ext(c.Y, T);
        for (auto& v : c.vars) v = d.subst_tm(e.proj, v);
        c.vars.push_back(e.var);
        c.steps.push_back(T);
        c.Y = e.extended;
    }
    return c;
}

}  // namespace

NMorphism initial_morphism(std::shared_ptr<const TermModel> tmodel, ModelPtr target, const std::vector<Key>& O) {
    if (static_cast<int>(O.size()) != tmodel->index_size())
        throw MalformedInput("initial morphism needs one closed type per basic type");
    for (const auto& o : O)
        if (!target->is_type(target->empty(), o)) throw MalformedInput(o + " is not a closed type of " + target->name());
    auto cache = std::make_shared<std::map<Key, Chain>>();
    auto chain = [tmodel, target, O, cache](const Key& ctx) -> const Chain& {
        auto it = cache->find(ctx);
        if (it != cache->end()) return it->second;
        std::vector<Key> closed;
        for (int i : parse_int_list(ctx)) closed.push_back(O.at(i));
        return cache->emplace(ctx, closed_chain(*target, closed)).first->second;
    };
    NMorphism F;
    F.src = tmodel;
    F.tgt = target;
    F.name = "initial";
    F.obj = [chain](const Key& ctx) { return chain(ctx).Y; };
    F.mor = [tmodel, target, chain](const Key& s) {
        const auto& src = chain(tmodel->dom(s));
        const auto& dst = chain(tmodel->cod(s));
        auto fn = FinSliceOp::function(s);
        Key g = target->to_terminal(src.Y);
        for (std::size_t k = 0; k < fn.size(); ++k) g = indsub(*target, g, src.vars.at(fn[k]), dst.steps[k]);
        return g;
    };
    F.ty = [target, chain, O](const Key& ctx, const Key& A) {
        return target->subst_ty(target->to_terminal(chain(ctx).Y), O.at(std::stoi(A)));
    };
    F.tm = [chain](const Key& ctx, const Key& a) { return chain(ctx).vars.at(std::stoi(a)); };
    return F;
}

// ---- polynomial composite ----

std::vector<Key> PolyComposite::ty(const Key& ctx) const {
    std::vector<Key> out;
    for (const auto& A : q_->ty(ctx))
        for (const auto& B : inner_->ty(q_->ext(ctx, A).extended)) out.push_back(tup({A, B}));
    return out;
}

std::vector<Key> PolyComposite::tm(const Key& ctx) const {
    std::vector<Key> out;
    auto qs = q_->tm(ctx);
    auto ps = inner_->tm(ctx);
    for (const auto& A : q_->ty(ctx)) {
        auto e = q_->ext(ctx, A);
        for (const auto& B : inner_->ty(e.extended))
            for (const auto& a : qs) {
                if (q_->type_of(ctx, a) != A) continue;
                Key Ba = inner_->subst_ty(section(*q_, ctx, A, a), B);
                for (const auto& b : ps)
                    if (inner_->type_of(ctx, b) == Ba) out.push_back(tup({A, B, a, b}));
            }
    }
    return out;
}

Key PolyComposite::type_of(const Key&, const Key& a) const {
    auto v = split_tup(a);
    if (v.size() != 4) throw MalformedInput("not a composite term: " + a);
    return tup({v[0], v[1]});
}

Key PolyComposite::subst_ty(const Key& s, const Key& A) const {
    auto v = split_tup(A);
    if (v.size() != 2) throw MalformedInput("not a composite type: " + A);
    return tup({q_->subst_ty(s, v[0]), inner_->subst_ty(canonical_pullback(*q_, s, v[0]), v[1])});
}

Key PolyComposite::subst_tm(const Key& s, const Key& a) const {
    auto v = split_tup(a);
    if (v.size() != 4) throw MalformedInput("not a composite term: " + a);
    auto AB = split_tup(subst_ty(s, tup({v[0], v[1]})));
    return tup({AB[0], AB[1], q_->subst_tm(s, v[2]), inner_->subst_tm(s, v[3])});
}

ExtData PolyComposite::ext(const Key& ctx, const Key& A) const {
    auto v = split_tup(A);
    if (v.size() != 2) throw MalformedInput("not a composite type: " + A);
    auto eq = q_->ext(ctx, v[0]);
    auto ep = inner_->ext(eq.extended, v[1]);
    Key proj = inner_->compose(eq.proj, ep.proj);
    auto AB = split_tup(subst_ty(proj, A));
    return {ep.extended, proj, tup({AB[0], AB[1], q_->subst_tm(ep.proj, eq.var), ep.var})};
}

std::optional<Key> PolyComposite::pair(const Key& s, const Key& A, const Key& a) const {
    auto v = split_tup(A), w = split_tup(a);
    if (v.size() != 2 || w.size() != 4) throw MalformedInput("not a composite pair: " + a);
    Key g1 = indsub(*q_, s, w[2], v[0]);
    return indsub(*inner_, g1, w[3], v[1]);
}

bool PolyComposite::is_type(const Key& ctx, const Key& A) const {
    try {
        auto v = split_tup(A);
        return v.size() == 2 && q_->is_type(ctx, v[0]) && inner_->is_type(q_->ext(ctx, v[0]).extended, v[1]);
    } catch (const std::exception&) {
        return false;
    }
}

bool PolyComposite::is_term(const Key& ctx, const Key& a) const {
    try {
        auto v = split_tup(a);
        if (v.size() != 4 || !is_type(ctx, tup({v[0], v[1]}))) return false;
        if (!q_->is_term(ctx, v[2]) || q_->type_of(ctx, v[2]) != v[0]) return false;
        Key Ba = inner_->subst_ty(section(*q_, ctx, v[0], v[2]), v[1]);
        return inner_->is_term(ctx, v[3]) && inner_->type_of(ctx, v[3]) == Ba;
    } catch (const std::exception&) {
        return false;
    }
}

std::shared_ptr<const PolyComposite> poly_composite_models(ModelPtr p, ModelPtr q) {
    if (p->empty() != q->empty()) throw MalformedInput("composite needs a common category of contexts");
    return std::make_shared<PolyComposite>(std::move(p), std::move(q));
}

}  // namespace natmod
