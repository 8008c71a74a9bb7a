#include "natmod/freemodel.hpp"

#include <numeric>

namespace natmod {

namespace {

std::vector<int> iota(int n) {
    std::vector<int> v(n);
    std::iota(v.begin(), v.end(), 0);
    return v;
}

// all functions [n] -> [m], as lists
std::vector<std::vector<int>> functions(int n, int m) {
    std::vector<std::vector<int>> out;
    if (n > 0 && m == 0) return out;
    std::vector<int> f(n, 0);
    while (true) {
        out.push_back(f);
        int k = n;
        while (k > 0) {
            --k;
            if (++f[k] < m) break;
            f[k] = 0;
            if (k == 0) return out;
        }
        if (n == 0) return out;
    }
}

// compositions of total into parts parts, the first at least first_min
void compositions(int total, int parts, int first_min, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
    if (static_cast<int>(cur.size()) == parts) {
        if (total == 0) out.push_back(cur);
        return;
    }
    int lo = cur.empty() ? first_min : 0;
    for (int v = lo; v <= total; ++v) {
        cur.push_back(v);
        compositions(total - v, parts, first_min, cur, out);
        cur.pop_back();
    }
}

}  // namespace

int Interleaved::formal() const { return std::accumulate(counts.begin(), counts.end(), 0); }

Key Interleaved::key() const {
    std::vector<Key> parts{gamma, std::to_string(counts.at(0))};
    for (std::size_t i = 0; i < types.size(); ++i) {
        parts.push_back(types[i]);
        parts.push_back(std::to_string(counts.at(i + 1)));
    }
    return tup(parts);
}

Interleaved Interleaved::parse(const Key& X) {
    auto v = split_tup(X);
    if (v.size() < 2 || v.size() % 2 != 0) throw MalformedInput("not an interleaved context: " + X);
    Interleaved x;
    x.gamma = v[0];
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (i % 2 == 1) {
            int k = 0;
            try {
                k = std::stoi(v[i]);
            } catch (const std::exception&) {
                throw MalformedInput("bad variable count in " + X);
            }
            if (k < 0) throw MalformedInput("bad variable count in " + X);
            x.counts.push_back(k);
        } else {
            x.types.push_back(v[i]);
        }
    }
    return x;
}

FormalExtension::FormalExtension(ModelPtr base, Kind kind) : m_(std::move(base)), kind_(kind) {}

Key FormalExtension::formal_term(int j) const {
    return kind_ == Kind::Type ? tup({"v", std::to_string(j)}) : Key("*");
}

Key FormalExtension::normalize(Interleaved x) const {
    while (!x.types.empty() && x.counts[0] == 0) {
        x.gamma = m_->ext(x.gamma, x.types[0]).extended;
        x.types.erase(x.types.begin());
        x.counts.erase(x.counts.begin());
    }
    return x.key();
}

Key FormalExtension::underlying(const Key& X) const {
    auto x = Interleaved::parse(X);
    Key E = x.gamma;
    for (const auto& A : x.types) E = m_->ext(E, A).extended;
    return E;
}

Key FormalExtension::inner(const Key& f) const {
    auto p = mor_parts(f)[2];
    return kind_ == Kind::Type ? split_tup(p)[0] : p;
}

std::vector<int> FormalExtension::formal_map(const Key& f) const {
    if (kind_ != Kind::Type) return {};
    return parse_int_list(split_tup(mor_parts(f)[2])[1]);
}

Key FormalExtension::make(const Key& X, const Key& Y, const Key& s, const std::vector<int>& h) const {
    return mor_key(X, Y, kind_ == Kind::Type ? tup({s, int_list(h)}) : s);
}

std::vector<Key> FormalExtension::objects(int bound) const {
    std::vector<Key> out;
    for (int j = 0; j <= bound; ++j)
        for (const auto& G : m_->objects(bound - j))
            for (int n = 0; n <= j; ++n) {
                std::vector<std::vector<int>> ks;
                std::vector<int> cur;
                compositions(j - n, n + 1, n == 0 ? 0 : 1, cur, ks);
                if (ks.empty()) continue;
                // chains of n base types
                std::vector<std::pair<std::vector<Key>, Key>> layer{{{}, G}};
                for (int i = 0; i < n; ++i) {
                    std::vector<std::pair<std::vector<Key>, Key>> next;
                    for (const auto& [ts, E] : layer)
                        for (const auto& A : m_->ty(E)) {
                            auto t2 = ts;
                            t2.push_back(A);
                            next.push_back({t2, m_->ext(E, A).extended});
                        }
                    layer = std::move(next);
                }
                for (const auto& [ts, E] : layer)
                    for (const auto& k : ks) out.push_back(Interleaved{G, ts, k}.key());
            }
    return out;
}

std::vector<Key> FormalExtension::hom(const Key& src, const Key& dst) const {
    std::vector<Key> out;
    auto base = m_->hom(underlying(src), underlying(dst));
    if (kind_ == Kind::Unit) {
        for (const auto& s : base) out.push_back(make(src, dst, s, {}));
        return out;
    }
    auto hs = functions(Interleaved::parse(dst).formal(), Interleaved::parse(src).formal());
    for (const auto& s : base)
        for (const auto& h : hs) out.push_back(make(src, dst, s, h));
    return out;
}

Key FormalExtension::compose(const Key& g, const Key& f) const {
    auto fp = mor_parts(f), gp = mor_parts(g);
    if (fp[1] != gp[0]) throw Undefined("compose: " + g + " . " + f);
    Key s = m_->compose(inner(g), inner(f));
    std::vector<int> h;
    if (kind_ == Kind::Type) {
        auto hf = formal_map(f), hg = formal_map(g);
        for (int j : hg) h.push_back(hf.at(j));
    }
    return make(fp[0], gp[1], s, h);
}

Key FormalExtension::identity(const Key& x) const {
    return make(x, x, m_->identity(underlying(x)), iota(Interleaved::parse(x).formal()));
}

Key FormalExtension::empty() const { return Interleaved{m_->empty(), {}, {0}}.key(); }

Key FormalExtension::to_terminal(const Key& ctx) const {
    return make(ctx, empty(), m_->to_terminal(underlying(ctx)), {});
}

std::vector<Key> FormalExtension::ty(const Key& ctx) const {
    std::vector<Key> out{formal_type()};
    for (const auto& A : m_->ty(underlying(ctx))) out.push_back(constant(A));
    return out;
}

std::vector<Key> FormalExtension::tm(const Key& ctx) const {
    std::vector<Key> out;
    if (kind_ == Kind::Type)
        for (int j = 0; j < Interleaved::parse(ctx).formal(); ++j) out.push_back(formal_term(j));
    else
        out.push_back("*");
    for (const auto& a : m_->tm(underlying(ctx))) out.push_back(constant(a));
    return out;
}

namespace {

Key payload(const Key& k, const std::string& what) {
    auto v = split_tup(k);
    if (v.size() != 2 || v[0] != "c") throw MalformedInput("not a " + what + ": " + k);
    return v[1];
}

}  // namespace

Key FormalExtension::type_of(const Key& ctx, const Key& a) const {
    if (kind_ == Kind::Unit && a == "*") return "1";
    if (starts_with(a, "(v,")) {
        if (!is_term(ctx, a)) throw Undefined("no variable " + a + " in " + ctx);
        return "X";
    }
    return constant(m_->type_of(underlying(ctx), payload(a, "term")));
}

Key FormalExtension::subst_ty(const Key& s, const Key& A) const {
    if (A == formal_type()) return A;
    return constant(m_->subst_ty(inner(s), payload(A, "type")));
}

Key FormalExtension::subst_tm(const Key& s, const Key& a) const {
    if (kind_ == Kind::Unit && a == "*") return a;
    if (starts_with(a, "(v,")) {
        int j = std::stoi(split_tup(a)[1]);
        return formal_term(formal_map(s).at(j));
    }
    return constant(m_->subst_tm(inner(s), payload(a, "term")));
}

ExtData FormalExtension::ext(const Key& ctx, const Key& A) const {
    if (!is_type(ctx, A)) throw Undefined(A + " is not a type over " + ctx);
    auto x = Interleaved::parse(ctx);
    const int k = x.formal();
    const Key E = underlying(ctx);
    if (A == formal_type()) {
        x.counts.back() += 1;
        Key X2 = normalize(x);
        return {X2, make(X2, ctx, m_->identity(E), iota(k)), formal_term(k)};
    }
    Key B = payload(A, "type");
    x.types.push_back(B);
    x.counts.push_back(0);
    Key X2 = normalize(x);
    auto e = m_->ext(E, B);
    return {X2, make(X2, ctx, e.proj, iota(k)), constant(e.var)};
}

std::optional<Key> FormalExtension::pair(const Key& s, const Key& A, const Key& a) const {
    const Key X2 = ext(cod(s), A).extended;
    const Key D = dom(s);
    if (A == formal_type()) {
        if (type_of(D, a) != A) throw Undefined("<" + s + ", " + a + ">: term not of type " + A);
        auto h = formal_map(s);
        if (kind_ == Kind::Type) h.push_back(std::stoi(split_tup(a)[1]));
        return make(D, X2, inner(s), h);
    }
    Key g = indsub(*m_, inner(s), payload(a, "term"), payload(A, "type"));
    return make(D, X2, g, formal_map(s));
}

bool FormalExtension::is_type(const Key& ctx, const Key& A) const {
    if (A == formal_type()) return true;
    try {
        return m_->is_type(underlying(ctx), payload(A, "type"));
    } catch (const MalformedInput&) {
        return false;
    }
}

bool FormalExtension::is_term(const Key& ctx, const Key& a) const {
    if (kind_ == Kind::Unit && a == "*") return true;
    try {
        auto v = split_tup(a);
        if (kind_ == Kind::Type && v.size() == 2 && v[0] == "v") {
            int j = std::stoi(v[1]);
            return j >= 0 && j < Interleaved::parse(ctx).formal() && formal_term(j) == a;
        }
        return m_->is_term(underlying(ctx), payload(a, "term"));
    } catch (const std::exception&) {
        return false;
    }
}

std::shared_ptr<const FormalExtension> extend_by_type(ModelPtr m) {
    return std::make_shared<FormalExtension>(std::move(m), FormalExtension::Kind::Type);
}

std::shared_ptr<const FormalExtension> extend_by_unit(ModelPtr m) {
    return std::make_shared<FormalExtension>(std::move(m), FormalExtension::Kind::Unit);
}

NMorphism formal_inclusion(std::shared_ptr<const FormalExtension> e) {
    ModelPtr m = e->base_ptr();
    NMorphism I;
    I.src = m;
    I.tgt = e;
    I.name = "I";
    I.obj = [](const Key& G) { return Interleaved{G, {}, {0}}.key(); };
    I.mor = [m, e](const Key& s) {
        return e->make(Interleaved{m->dom(s), {}, {0}}.key(), Interleaved{m->cod(s), {}, {0}}.key(), s, {});
    };
    I.ty = [](const Key&, const Key& A) { return FormalExtension::constant(A); };
    I.tm = [](const Key&, const Key& a) { return FormalExtension::constant(a); };
    return I;
}

namespace {

struct FormalChain {
    Key Y, w;                 // w : Y -> F(E)
    std::vector<Key> vars;    // formal variables weakened to Y
    std::vector<Key> steps;   // type added at each step, over the prefix
    std::vector<bool> formal;
    std::vector<Key> Es;      // base prefix before each real step
    std::vector<Key> As;      // base type of each real step
};

// The shared walk behind type_sharp and unit_sharp: formal steps extend by
// closed(Y), real steps by F(A)[w].
NMorphism formal_sharp(std::shared_ptr<const FormalExtension> e, const NMorphism& F,
                       std::function<Key(const Key& Y)> closed, std::function<Key(const Key& Y)> point,
                       std::string name) {
    ModelPtr D = F.tgt;
    ModelPtr m = e->base_ptr();
    auto cache = std::make_shared<std::map<Key, FormalChain>>();
    auto chain = [D, m, F, closed, cache](const Key& X) -> const FormalChain& {
        auto it = cache->find(X);
        if (it != cache->end()) return it->second;
        auto x = Interleaved::parse(X);
        FormalChain c;
        c.Y = F.obj(x.gamma);
        c.w = D->identity(c.Y);
        Key E = x.gamma;
        auto formal_step = [&] {
            Key T = closed(c.Y);
            auto ey = D->ext(c.Y, T);
            for (auto& v : c.vars) v = D->subst_tm(ey.proj, v);
            c.vars.push_back(ey.var);
            c.steps.push_back(T);
            c.formal.push_back(true);
            c.w = D->compose(c.w, ey.proj);
            c.Y = ey.extended;
        };
        for (std::size_t i = 0; i <= x.types.size(); ++i) {
            if (i > 0) {
                const Key& A = x.types[i - 1];
                Key B = F.ty(E, A);
                Key T = D->subst_ty(c.w, B);
                auto ey = D->ext(c.Y, T);
                for (auto& v : c.vars) v = D->subst_tm(ey.proj, v);
                c.steps.push_back(T);
                c.formal.push_back(false);
                c.Es.push_back(E);
                c.As.push_back(A);
                c.w = canonical_pullback(*D, c.w, B);
                c.Y = ey.extended;
                E = m->ext(E, A).extended;
            }
            for (int j = 0; j < x.counts[i]; ++j) formal_step();
        }
        return cache->emplace(X, std::move(c)).first->second;
    };
    const bool typed = e->kind() == FormalExtension::Kind::Type;
    NMorphism S;
    S.src = e;
    S.tgt = D;
    S.name = std::move(name);
    S.obj = [chain](const Key& X) { return chain(X).Y; };
    S.ty = [D, F, e, chain, closed](const Key& X, const Key& A) {
        const auto& c = chain(X);
        if (A == e->formal_type()) return closed(c.Y);
        return D->subst_ty(c.w, F.ty(e->underlying(X), split_tup(A)[1]));
    };
    S.tm = [D, F, e, chain, point, typed](const Key& X, const Key& a) {
        const auto& c = chain(X);
        if (!typed && a == "*") return point(c.Y);
        if (typed && starts_with(a, "(v,")) return c.vars.at(std::stoi(split_tup(a)[1]));
        return D->subst_tm(c.w, F.tm(e->underlying(X), split_tup(a)[1]));
    };
    S.mor = [D, m, e, F, chain, point, typed](const Key& t) {
        const Key X1 = e->dom(t), X = e->cod(t);
        const auto& src = chain(X1);
        const auto& dst = chain(X);
        const Key s = e->inner(t);
        auto h = e->formal_map(t);
        // base projections E -> E_i for the real steps of X
        auto x = Interleaved::parse(X);
        Key E = e->underlying(X);
        const std::size_t n = dst.As.size();
        std::vector<Key> down(n + 1);  // down[i] : E -> prefix after i real steps
        std::vector<Key> qs(n);
        {
            std::vector<Key> ctxs{x.gamma}, projs;
            for (std::size_t i = 0; i < n; ++i) {
                auto ex = m->ext(ctxs.back(), dst.As[i]);
                ctxs.push_back(ex.extended);
                projs.push_back(ex.proj);
                qs[i] = ex.var;
            }
            down[n] = m->identity(E);
            for (std::size_t i = n; i > 0; --i) down[i - 1] = m->compose(projs[i - 1], down[i]);
        }
        Key g = D->compose(F.mor(m->compose(down[0], s)), src.w);
        std::size_t real = 0;
        int formal = 0;
        for (std::size_t k = 0; k < dst.steps.size(); ++k) {
            Key a;
            if (dst.formal[k]) {
                a = typed ? src.vars.at(h.at(formal)) : point(src.Y);
                ++formal;
            } else {
                Key b = m->subst_tm(s, m->subst_tm(down[real + 1], qs[real]));
                a = D->subst_tm(src.w, F.tm(e->underlying(X1), b));
                ++real;
            }
            g = indsub(*D, g, a, dst.steps[k]);
        }
        return g;
    };
    return S;
}

}  // namespace

NMorphism type_sharp(std::shared_ptr<const FormalExtension> e, const NMorphism& F, const Key& O) {
    if (e->kind() != FormalExtension::Kind::Type) throw MalformedInput("type_sharp needs a basic type extension");
    ModelPtr D = F.tgt;
    if (!D->is_type(D->empty(), O)) throw MalformedInput(O + " is not a closed type of " + D->name());
    auto closed = [D, O](const Key& Y) { return D->subst_ty(D->to_terminal(Y), O); };
    auto none = [](const Key&) -> Key { throw Undefined("no point"); };
    return formal_sharp(e, F, closed, none, F.name + "#");
}

NMorphism type_insertion(std::shared_ptr<const FormalExtension> e, const Key& O) {
    auto S = type_sharp(e, identity_morphism(e->base_ptr()), O);
    S.name = "S";
    return S;
}

NMorphism unit_sharp(std::shared_ptr<const FormalExtension> e, const NMorphism& F, const UnitStructure& u) {
    if (e->kind() != FormalExtension::Kind::Unit) throw MalformedInput("unit_sharp needs a unit extension");
    ModelPtr D = F.tgt;
    auto closed = [D, u](const Key& Y) { return D->subst_ty(D->to_terminal(Y), u.unit); };
    auto point = [D, u](const Key& Y) { return D->subst_tm(D->to_terminal(Y), u.star); };
    return formal_sharp(e, F, closed, point, F.name + "#");
}

NMorphism unit_insertion(std::shared_ptr<const FormalExtension> e, const UnitStructure& u) {
    auto N = unit_sharp(e, identity_morphism(e->base_ptr()), u);
    N.name = "N";
    return N;
}

}  // namespace natmod
