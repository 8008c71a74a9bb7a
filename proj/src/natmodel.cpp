#include "natmod/natmodel.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace natmod {

namespace {

const char* kEq[] = {"",       "(i)",    "(ii)",    "(iii)",  "(iv)",   "(v)",    "(vi)",    "(vii)",
                     "(viii)", "(ix)",   "(x)",     "(xi)",   "(xii)",  "(xiii)", "(xiv)",   "(xv)",
                     "(xvi)",  "(xvii)", "(xviii)", "(xix)",  "(xx)",   "(xxi)",  "(xxii)",  "(xxiii)",
                     "(xxiv)", "(xxv)",  "(xxvi)",  "(xxvii)"};

class HomCache {
public:
    explicit HomCache(const Category& c) : c_(c) {}
    const std::vector<Key>& operator()(const Key& a, const Key& b) {
        auto it = cache_.find({a, b});
        if (it == cache_.end()) it = cache_.emplace(std::make_pair(a, b), c_.hom(a, b)).first;
        return it->second;
    }

private:
    const Category& c_;
    std::map<std::pair<Key, Key>, std::vector<Key>> cache_;
};

std::string sq(const std::string& a) { return "[" + a + "]"; }

}  // namespace

Key NaturalModel::to_terminal(const Key& ctx) const {
    auto h = hom(ctx, empty());
    if (h.size() != 1) throw Undefined("no unique map from " + ctx + " to the empty context");
    return h[0];
}

std::optional<Key> NaturalModel::pair(const Key&, const Key&, const Key&) const { return std::nullopt; }

bool NaturalModel::is_type(const Key& ctx, const Key& A) const {
    auto t = ty(ctx);
    return std::find(t.begin(), t.end(), A) != t.end();
}

bool NaturalModel::is_term(const Key& ctx, const Key& a) const {
    auto t = tm(ctx);
    return std::find(t.begin(), t.end(), a) != t.end();
}

Key indsub(const NaturalModel& m, const Key& s, const Key& a, const Key& A) {
    if (auto c = m.pair(s, A, a)) return *c;
    const Key G = m.cod(s), D = m.dom(s);
    auto e = m.ext(G, A);
    std::optional<Key> hit;
    for (const auto& g : m.hom(D, e.extended)) {
        if (m.compose(e.proj, g) != s || m.subst_tm(g, e.var) != a) continue;
        if (hit) throw Undefined("<" + s + ", " + a + "> is not unique");
        hit = g;
    }
    if (!hit) throw Undefined("<" + s + ", " + a + "> does not exist");
    return *hit;
}

Key section(const NaturalModel& m, const Key& ctx, const Key& A, const Key& a) {
    return indsub(m, m.identity(ctx), a, A);
}

Key canonical_pullback(const NaturalModel& m, const Key& s, const Key& A) {
    const Key G = m.cod(s), D = m.dom(s);
    if (!m.is_type(G, A)) throw Undefined("canonical pullback: " + A + " is not a type over " + G);
    Key As = m.subst_ty(s, A);
    auto e = m.ext(D, As);
    return indsub(m, m.compose(s, e.proj), e.var, A);
}

std::optional<Key> inverse(const Category& c, const Key& h) {
    const Key x = c.dom(h), y = c.cod(h);
    const Key ix = c.identity(x), iy = c.identity(y);
    for (const auto& k : c.hom(y, x))
        if (c.compose(k, h) == ix && c.compose(h, k) == iy) return k;
    return std::nullopt;
}

std::optional<Key> find_iso(const Category& c, const Key& x, const Key& y) {
    for (const auto& h : c.hom(x, y))
        if (inverse(c, h)) return h;
    return std::nullopt;
}

Presheaf ty_presheaf(ModelPtr m, int bound) {
    Presheaf P;
    P.base = m;
    P.bound = bound;
    P.name = "Ty";
    P.values = [m](const Key& c) { return m->ty(c); };
    P.act = [m](const Key& f, const Key& A) { return m->subst_ty(f, A); };
    return P;
}

Presheaf tm_presheaf(ModelPtr m, int bound) {
    Presheaf P;
    P.base = m;
    P.bound = bound;
    P.name = "Tm";
    P.values = [m](const Key& c) { return m->tm(c); };
    P.act = [m](const Key& f, const Key& a) { return m->subst_tm(f, a); };
    return P;
}

NatTrans typing(ModelPtr m, int bound) {
    return NatTrans{tm_presheaf(m, bound), ty_presheaf(m, bound),
                    [m](const Key& c, const Key& a) { return m->type_of(c, a); }};
}

Report check_eat(const NaturalModel& m, int bound) {
    Report r("EAT " + m.name(), bound);
    HomCache hom(m);
    auto objs = m.objects(bound);
    const Key E = m.empty();
    std::map<Key, std::vector<Key>> tys, tms;
    for (const auto& G : objs) {
        tys[G] = m.ty(G);
        tms[G] = m.tm(G);
    }
    auto guard = [&](const char* eq, const std::string& where, auto&& fn) {
        try {
            fn();
        } catch (const std::exception& ex) {
            r.fail(eq, where + ": " + ex.what());
        }
    };

    // Category of contexts
    for (const auto& G : objs) {
        Key id = m.identity(G);
        if (m.dom(id) != G) r.fail(kEq[1], "dom id " + G);
        if (m.cod(id) != G) r.fail(kEq[2], "cod id " + G);
    }
    for (const auto& D : objs)
        for (const auto& G : objs)
            for (const auto& s : hom(D, G)) {
                if (m.compose(s, m.identity(D)) != s) r.fail(kEq[5], s + " . id");
                if (m.compose(m.identity(G), s) != s) r.fail(kEq[6], "id . " + s);
                for (const auto& T : objs)
                    for (const auto& t : hom(G, T)) {
                        Key ts = m.compose(t, s);
                        if (m.dom(ts) != D) r.fail(kEq[3], t + " . " + s);
                        if (m.cod(ts) != T) r.fail(kEq[4], t + " . " + s);
                        for (const auto& U : objs)
                            for (const auto& u : hom(T, U))
                                if (m.compose(m.compose(u, t), s) != m.compose(u, ts))
                                    r.fail(kEq[7], u + " . " + t + " . " + s);
                    }
            }

    // Empty context is terminal
    for (const auto& G : objs) {
        guard(kEq[10], "t " + G, [&] {
            Key t = m.to_terminal(G);
            if (m.dom(t) != G) r.fail(kEq[8], "dom t " + G);
            if (m.cod(t) != E) r.fail(kEq[9], "cod t " + G);
            auto n = hom(G, E).size();
            if (n != 1) r.fail(kEq[10], G + " has " + std::to_string(n) + " maps to the empty context");
            for (const auto& D : objs)
                for (const auto& f : hom(D, G))
                    if (m.compose(t, f) != m.to_terminal(D)) r.fail(kEq[10], "t " + G + " . " + f);
        });
    }

    // Presheaves of types and terms, typing
    for (const auto& G : objs) {
        Key id = m.identity(G);
        for (const auto& A : tys[G])
            if (m.subst_ty(id, A) != A) r.fail(kEq[11], A + sq("id " + G));
        for (const auto& a : tms[G]) {
            if (m.subst_tm(id, a) != a) r.fail(kEq[14], a + sq("id " + G));
            guard(kEq[17], a, [&] {
                if (!m.is_type(G, m.type_of(G, a))) r.fail(kEq[17], "typeof " + a + " not over " + G);
            });
        }
    }
    for (const auto& D : objs)
        for (const auto& G : objs)
            for (const auto& s : hom(D, G)) {
                for (const auto& A : tys[G])
                    guard(kEq[13], A + sq(s), [&] {
                        if (!m.is_type(D, m.subst_ty(s, A))) r.fail(kEq[13], A + sq(s) + " not over " + D);
                    });
                for (const auto& a : tms[G])
                    guard(kEq[16], a + sq(s), [&] {
                        Key as = m.subst_tm(s, a);
                        if (!m.is_term(D, as)) r.fail(kEq[16], a + sq(s) + " not over " + D);
                        if (m.type_of(D, as) != m.subst_ty(s, m.type_of(G, a))) r.fail(kEq[18], a + sq(s));
                    });
                for (const auto& T : objs)
                    for (const auto& t : hom(G, T)) {
                        Key ts = m.compose(t, s);
                        for (const auto& A : tys[T])
                            guard(kEq[12], A, [&] {
                                if (m.subst_ty(ts, A) != m.subst_ty(s, m.subst_ty(t, A)))
                                    r.fail(kEq[12], A + sq(t + " . " + s));
                            });
                        for (const auto& a : tms[T])
                            guard(kEq[15], a, [&] {
                                if (m.subst_tm(ts, a) != m.subst_tm(s, m.subst_tm(t, a)))
                                    r.fail(kEq[15], a + sq(t + " . " + s));
                            });
                    }
            }

    // Representability
    for (const auto& G : objs)
        for (const auto& A : tys[G]) {
            ExtData e;
            try {
                e = m.ext(G, A);
            } catch (const std::exception& ex) {
                r.fail(kEq[19], G + "." + A + ": " + ex.what());
                continue;
            }
            if (m.dom(e.proj) != e.extended) r.fail(kEq[19], "dom p_" + A + " over " + G);
            if (m.cod(e.proj) != G) r.fail(kEq[20], "cod p_" + A + " over " + G);
            if (!m.is_term(e.extended, e.var)) r.fail(kEq[21], "q_" + A + " not over " + e.extended);
            else if (m.type_of(e.extended, e.var) != m.subst_ty(e.proj, A)) r.fail(kEq[22], "typeof q_" + A);

            for (const auto& D : objs)
                for (const auto& s : hom(D, G)) {
                    Key As = m.subst_ty(s, A);
                    for (const auto& a : tms[D]) {
                        if (m.type_of(D, a) != As) continue;
                        std::string where = "<" + s + ", " + a + ">_" + A;
                        Key g;
                        try {
                            g = indsub(m, s, a, A);
                        } catch (const Undefined& ex) {
                            r.fail(std::string(ex.what()).find("not unique") != std::string::npos ? kEq[27] : kEq[25],
                                   where + ": " + ex.what());
                            continue;
                        }
                        if (m.dom(g) != D) r.fail(kEq[23], where);
                        if (m.cod(g) != e.extended) r.fail(kEq[24], where);
                        if (m.compose(e.proj, g) != s) r.fail(kEq[25], where);
                        if (m.subst_tm(g, e.var) != a) r.fail(kEq[26], where);
                    }
                }
            for (const auto& D : objs)
                for (const auto& s : hom(D, e.extended)) {
                    try {
                        if (indsub(m, m.compose(e.proj, s), m.subst_tm(s, e.var), A) != s)
                            r.fail(kEq[27], "<p . " + s + ", q[" + s + "]>_" + A);
                    } catch (const std::exception& ex) {
                        r.fail(kEq[27], s + ": " + ex.what());
                    }
                }
        }
    return r;
}

Report check_ext_squares(ModelPtr m, int bound) {
    Report r("extension squares " + m->name(), bound);
    auto p = typing(m, bound);
    for (const auto& G : m->objects(bound))
        for (const auto& A : m->ty(G)) {
            auto e = m->ext(G, A);
            auto sqr = pullback_square_report(p, yoneda_element(p.cod, G, A), yoneda_element(p.dom, e.extended, e.var),
                                              yoneda_map(m, bound, e.proj));
            if (!sqr.ok()) r.merge(sqr, G + "." + A + " ");
        }
    return r;
}

RepresentabilityReport model_representability(ModelPtr m, int bound) {
    // the chosen extensions may be larger than bound + 1, so they are candidates too
    std::vector<Key> chosen;
    for (const auto& G : m->objects(bound))
        for (const auto& A : m->ty(G)) try {
                chosen.push_back(m->ext(G, A).extended);
            } catch (const std::exception&) {
            }
    return is_representable(typing(m, bound), bound + 1, chosen);
}

// ---- type formers ----

namespace {

std::vector<std::pair<Key, Key>> split_all(const NaturalModel& m, const SigmaStructure& s, const Key& G, const Key& A,
                                           const Key& B, const Key& p) {
    std::vector<std::pair<Key, Key>> out;
    auto terms = m.tm(G);
    for (const auto& a : terms) {
        if (m.type_of(G, a) != A) continue;
        Key Ba = m.subst_ty(section(m, G, A, a), B);
        for (const auto& b : terms)
            if (m.type_of(G, b) == Ba && s.pair(G, A, B, a, b) == p) out.emplace_back(a, b);
    }
    return out;
}

}  // namespace

std::optional<std::pair<Key, Key>> sigma_split(const NaturalModel& m, const SigmaStructure& s, const Key& ctx,
                                               const Key& A, const Key& B, const Key& p) {
    auto all = split_all(m, s, ctx, A, B, p);
    if (all.size() != 1) return std::nullopt;
    return all[0];
}

std::optional<Key> pi_app(const NaturalModel& m, const PiStructure& s, const Key& ctx, const Key& A, const Key& B,
                          const Key& f, const Key& a) {
    auto e = m.ext(ctx, A);
    std::optional<Key> body;
    for (const auto& b : m.tm(e.extended)) {
        if (m.type_of(e.extended, b) != B || s.lam(ctx, A, B, b) != f) continue;
        if (body) return std::nullopt;
        body = b;
    }
    if (!body) return std::nullopt;
    return m.subst_tm(section(m, ctx, A, a), *body);
}

Report check_unit(ModelPtr m, const UnitStructure& u, int bound) {
    Report r("unit type " + m->name(), bound);
    const Key E = m->empty();
    if (!m->is_type(E, u.unit)) throw MalformedInput("unit: " + u.unit + " is not a closed type");
    if (!m->is_term(E, u.star)) throw MalformedInput("unit: " + u.star + " is not a closed term");
    if (m->type_of(E, u.star) != u.unit) r.fail("(ii)", "typeof star = " + m->type_of(E, u.star));
    auto e = m->ext(E, u.unit);
    Key t = m->to_terminal(e.extended);
    if (e.proj != t) r.fail("(iii)", "p_unit = " + e.proj);
    if (e.var != m->subst_tm(t, u.star)) r.fail("(iv)", "q_unit = " + e.var);
    auto p = typing(m, bound);
    auto sqr = pullback_square_report(p, yoneda_element(p.cod, E, u.unit), yoneda_element(p.dom, E, u.star),
                                      identity_nat(yoneda(m, bound, E)));
    r.merge(sqr, "square ");
    return r;
}

Report check_sigma(ModelPtr m, const SigmaStructure& s, int bound) {
    Report r("dependent sums " + m->name(), bound);
    HomCache hom(*m);
    auto objs = m->objects(bound);
    auto guard = [&](const char* eq, const std::string& where, auto&& fn) {
        try {
            fn();
        } catch (const std::exception& ex) {
            r.fail(eq, where + ": " + ex.what());
        }
    };
    for (const auto& G : objs) {
        auto terms = m->tm(G);
        for (const auto& A : m->ty(G)) {
            auto e = m->ext(G, A);
            for (const auto& B : m->ty(e.extended)) {
                std::string where = "Sigma(" + A + ", " + B + ") over " + G;
                Key S;
                try {
                    S = s.sigma(G, A, B);
                } catch (const std::exception& ex) {
                    r.fail("(i)", where + ": " + ex.what());
                    continue;
                }
                if (!m->is_type(G, S)) r.fail("(i)", where);
                for (const auto& D : objs)
                    for (const auto& sg : hom(D, G))
                        guard("(ii)", where, [&] {
                            Key lhs = m->subst_ty(sg, S);
                            Key rhs = s.sigma(D, m->subst_ty(sg, A), m->subst_ty(canonical_pullback(*m, sg, A), B));
                            if (lhs != rhs) r.fail("(ii)", where + " along " + sg);
                        });
                // pairs
                for (const auto& a : terms) {
                    if (m->type_of(G, a) != A) continue;
                    Key Ba = m->subst_ty(section(*m, G, A, a), B);
                    for (const auto& b : terms) {
                        if (m->type_of(G, b) != Ba) continue;
                        std::string pw = "pair(" + a + ", " + b + ") in " + where;
                        guard("(iii)", pw, [&] {
                            Key p = s.pair(G, A, B, a, b);
                            if (m->type_of(G, p) != S) r.fail("(iii)", pw);
                            for (const auto& D : objs)
                                for (const auto& sg : hom(D, G)) {
                                    Key rhs = s.pair(D, m->subst_ty(sg, A), m->subst_ty(canonical_pullback(*m, sg, A), B),
                                                     m->subst_tm(sg, a), m->subst_tm(sg, b));
                                    if (m->subst_tm(sg, p) != rhs) r.fail("(iv)", pw + " along " + sg);
                                }
                            auto split = split_all(*m, s, G, A, B, p);
                            if (split.size() != 1) {
                                r.fail("(ix)", pw + " has " + std::to_string(split.size()) + " decompositions");
                                return;
                            }
                            if (split[0].first != a) r.fail("(ix)", pw);
                            if (split[0].second != b) r.fail("(x)", pw);
                        });
                    }
                }
                // projections of terms of Sigma type
                for (const auto& p : terms) {
                    if (m->type_of(G, p) != S) continue;
                    std::string pw = p + " : " + where;
                    guard("(xi)", pw, [&] {
                        auto split = split_all(*m, s, G, A, B, p);
                        if (split.size() != 1) {
                            r.fail("(xi)", pw + " has " + std::to_string(split.size()) + " decompositions");
                            return;
                        }
                        auto [fst, snd] = split[0];
                        if (m->type_of(G, fst) != A) r.fail("(v)", pw);
                        if (m->type_of(G, snd) != m->subst_ty(section(*m, G, A, fst), B)) r.fail("(vii)", pw);
                        if (s.pair(G, A, B, fst, snd) != p) r.fail("(xi)", pw);
                        for (const auto& D : objs)
                            for (const auto& sg : hom(D, G)) {
                                Key As = m->subst_ty(sg, A);
                                Key Bs = m->subst_ty(canonical_pullback(*m, sg, A), B);
                                auto there = split_all(*m, s, D, As, Bs, m->subst_tm(sg, p));
                                if (there.size() != 1) {
                                    r.fail("(vi)", pw + " along " + sg + " does not decompose uniquely");
                                    continue;
                                }
                                if (there[0].first != m->subst_tm(sg, fst)) r.fail("(vi)", pw + " along " + sg);
                                if (there[0].second != m->subst_tm(sg, snd)) r.fail("(viii)", pw + " along " + sg);
                            }
                    });
                }
            }
        }
    }

    // Sigma-hat and pair-hat as a pullback of p, on the pairs whose sum is enumerated.
    Presheaf Q, R;
    Q.base = R.base = m;
    Q.bound = R.bound = bound;
    Q.name = "TyTy";
    R.name = "TmTm";
    auto fam_act = [m](const Key& f, const Key& AB) {
        auto v = split_tup(AB);
        return tup({m->subst_ty(f, v[0]), m->subst_ty(canonical_pullback(*m, f, v[0]), v[1])});
    };
    auto in_range = [m, s](const Key& G, const Key& A, const Key& B) {
        auto t = m->ty(G);
        return std::find(t.begin(), t.end(), s.sigma(G, A, B)) != t.end();
    };
    Q.values = [m, in_range](const Key& G) {
        std::vector<Key> out;
        for (const auto& A : m->ty(G))
            for (const auto& B : m->ty(m->ext(G, A).extended))
                if (in_range(G, A, B)) out.push_back(tup({A, B}));
        return out;
    };
    Q.act = fam_act;
    R.values = [m, in_range](const Key& G) {
        std::vector<Key> out;
        auto terms = m->tm(G);
        for (const auto& A : m->ty(G))
            for (const auto& B : m->ty(m->ext(G, A).extended)) {
                if (!in_range(G, A, B)) continue;
                for (const auto& a : terms) {
                    if (m->type_of(G, a) != A) continue;
                    Key Ba = m->subst_ty(section(*m, G, A, a), B);
                    for (const auto& b : terms)
                        if (m->type_of(G, b) == Ba) out.push_back(tup({A, B, a, b}));
                }
            }
        return out;
    };
    R.act = [m, fam_act](const Key& f, const Key& x) {
        auto v = split_tup(x);
        auto AB = split_tup(fam_act(f, tup({v[0], v[1]})));
        return tup({AB[0], AB[1], m->subst_tm(f, v[2]), m->subst_tm(f, v[3])});
    };
    NatTrans sig{Q, ty_presheaf(m, bound), [s](const Key& G, const Key& AB) {
                     auto v = split_tup(AB);
                     return s.sigma(G, v[0], v[1]);
                 }};
    NatTrans pr{R, tm_presheaf(m, bound), [s](const Key& G, const Key& x) {
                    auto v = split_tup(x);
                    return s.pair(G, v[0], v[1], v[2], v[3]);
                }};
    NatTrans proj{R, Q, [](const Key&, const Key& x) {
                      auto v = split_tup(x);
                      return tup({v[0], v[1]});
                  }};
    try {
        r.merge(pullback_square_report(typing(m, bound), sig, pr, proj), "square ");
    } catch (const std::exception& ex) {
        r.fail("square", ex.what());
    }
    return r;
}

Report check_pi(ModelPtr m, const PiStructure& s, int bound) {
    Report r("dependent products " + m->name(), bound);
    HomCache hom(*m);
    auto objs = m->objects(bound);
    auto guard = [&](const char* eq, const std::string& where, auto&& fn) {
        try {
            fn();
        } catch (const std::exception& ex) {
            r.fail(eq, where + ": " + ex.what());
        }
    };
    for (const auto& G : objs) {
        auto terms = m->tm(G);
        for (const auto& A : m->ty(G)) {
            auto e = m->ext(G, A);
            auto body_terms = m->tm(e.extended);
            for (const auto& B : m->ty(e.extended)) {
                std::string where = "Pi(" + A + ", " + B + ") over " + G;
                Key P;
                try {
                    P = s.pi(G, A, B);
                } catch (const std::exception& ex) {
                    r.fail("(i)", where + ": " + ex.what());
                    continue;
                }
                if (!m->is_type(G, P)) r.fail("(i)", where);
                for (const auto& D : objs)
                    for (const auto& sg : hom(D, G))
                        guard("(ii)", where, [&] {
                            if (m->subst_ty(sg, P) !=
                                s.pi(D, m->subst_ty(sg, A), m->subst_ty(canonical_pullback(*m, sg, A), B)))
                                r.fail("(ii)", where + " along " + sg);
                        });
                for (const auto& b : body_terms) {
                    if (m->type_of(e.extended, b) != B) continue;
                    std::string lw = "lambda(" + b + ") in " + where;
                    guard("(iii)", lw, [&] {
                        Key l = s.lam(G, A, B, b);
                        if (m->type_of(G, l) != P) r.fail("(iii)", lw);
                        for (const auto& D : objs)
                            for (const auto& sg : hom(D, G)) {
                                Key sA = canonical_pullback(*m, sg, A);
                                if (m->subst_tm(sg, l) !=
                                    s.lam(D, m->subst_ty(sg, A), m->subst_ty(sA, B), m->subst_tm(sA, b)))
                                    r.fail("(iv)", lw + " along " + sg);
                            }
                        for (const auto& a : terms) {
                            if (m->type_of(G, a) != A) continue;
                            auto ap = pi_app(*m, s, G, A, B, l, a);
                            if (!ap || *ap != m->subst_tm(section(*m, G, A, a), b)) r.fail("(vii)", lw + " at " + a);
                        }
                    });
                }
                for (const auto& f : terms) {
                    if (m->type_of(G, f) != P) continue;
                    std::string fw = f + " : " + where;
                    guard("(viii)", fw, [&] {
                        for (const auto& a : terms) {
                            if (m->type_of(G, a) != A) continue;
                            auto ap = pi_app(*m, s, G, A, B, f, a);
                            if (!ap) {
                                r.fail("(v)", fw + " cannot be applied to " + a);
                                continue;
                            }
                            if (m->type_of(G, *ap) != m->subst_ty(section(*m, G, A, a), B)) r.fail("(v)", fw);
                            for (const auto& D : objs)
                                for (const auto& sg : hom(D, G)) {
                                    auto there = pi_app(*m, s, D, m->subst_ty(sg, A),
                                                        m->subst_ty(canonical_pullback(*m, sg, A), B),
                                                        m->subst_tm(sg, f), m->subst_tm(sg, a));
                                    if (!there || *there != m->subst_tm(sg, *ap)) r.fail("(vi)", fw + " along " + sg);
                                }
                        }
                        // eta: lambda(app(f[p_A], q_A)) = f
                        Key pA = e.proj;
                        auto ap = pi_app(*m, s, e.extended, m->subst_ty(pA, A),
                                         m->subst_ty(canonical_pullback(*m, pA, A), B), m->subst_tm(pA, f), e.var);
                        if (!ap || s.lam(G, A, B, *ap) != f) r.fail("(viii)", fw);
                    });
                }
            }
        }
    }

    // lambda-hat and Pi-hat as a pullback of p
    Presheaf Q, R;
    Q.base = R.base = m;
    Q.bound = R.bound = bound;
    Q.name = "TyTy";
    R.name = "TyTm";
    auto in_range = [m, s](const Key& G, const Key& A, const Key& B) {
        auto t = m->ty(G);
        return std::find(t.begin(), t.end(), s.pi(G, A, B)) != t.end();
    };
    Q.values = [m, in_range](const Key& G) {
        std::vector<Key> out;
        for (const auto& A : m->ty(G))
            for (const auto& B : m->ty(m->ext(G, A).extended))
                if (in_range(G, A, B)) out.push_back(tup({A, B}));
        return out;
    };
    Q.act = [m](const Key& f, const Key& AB) {
        auto v = split_tup(AB);
        return tup({m->subst_ty(f, v[0]), m->subst_ty(canonical_pullback(*m, f, v[0]), v[1])});
    };
    R.values = [m, in_range](const Key& G) {
        std::vector<Key> out;
        for (const auto& A : m->ty(G)) {
            auto GA = m->ext(G, A).extended;
            for (const auto& b : m->tm(GA))
                if (in_range(G, A, m->type_of(GA, b))) out.push_back(tup({A, b}));
        }
        return out;
    };
    R.act = [m](const Key& f, const Key& Ab) {
        auto v = split_tup(Ab);
        return tup({m->subst_ty(f, v[0]), m->subst_tm(canonical_pullback(*m, f, v[0]), v[1])});
    };
    NatTrans pi{Q, ty_presheaf(m, bound), [s](const Key& G, const Key& AB) {
                    auto v = split_tup(AB);
                    return s.pi(G, v[0], v[1]);
                }};
    NatTrans lam{R, tm_presheaf(m, bound), [m, s](const Key& G, const Key& Ab) {
                     auto v = split_tup(Ab);
                     auto GA = m->ext(G, v[0]).extended;
                     return s.lam(G, v[0], m->type_of(GA, v[1]), v[1]);
                 }};
    NatTrans proj{R, Q, [m](const Key& G, const Key& Ab) {
                      auto v = split_tup(Ab);
                      return tup({v[0], m->type_of(m->ext(G, v[0]).extended, v[1])});
                  }};
    try {
        r.merge(pullback_square_report(typing(m, bound), pi, lam, proj), "square ");
    } catch (const std::exception& ex) {
        r.fail("square", ex.what());
    }
    return r;
}

// ---- morphisms ----

NMorphism identity_morphism(ModelPtr m) {
    NMorphism F;
    F.src = F.tgt = m;
    F.name = "id";
    F.obj = [](const Key& x) { return x; };
    F.mor = [](const Key& x) { return x; };
    F.ty = [](const Key&, const Key& A) { return A; };
    F.tm = [](const Key&, const Key& a) { return a; };
    return F;
}

NMorphism compose_morphisms(const NMorphism& G, const NMorphism& F) {
    NMorphism H;
    H.src = F.src;
    H.tgt = G.tgt;
    H.name = G.name + " . " + F.name;
    H.obj = [G, F](const Key& x) { return G.obj(F.obj(x)); };
    H.mor = [G, F](const Key& s) { return G.mor(F.mor(s)); };
    H.ty = [G, F](const Key& c, const Key& A) { return G.ty(F.obj(c), F.ty(c, A)); };
    H.tm = [G, F](const Key& c, const Key& a) { return G.tm(F.obj(c), F.tm(c, a)); };
    return H;
}

Key comparison(const NMorphism& F, const Key& ctx, const Key& A) {
    const auto& T = *F.tgt;
    auto e = F.src->ext(ctx, A);
    return indsub(T, F.mor(e.proj), F.tm(e.extended, e.var), F.ty(ctx, A));
}

Key transport_ty(const NMorphism& F, const Key& ctx, const Key& A, const Key& B) {
    const auto& T = *F.tgt;
    auto e = T.ext(F.obj(ctx), F.ty(ctx, A));
    Key tau = comparison(F, ctx, A);
    if (tau == T.identity(e.extended)) return B;
    auto inv = inverse(T, tau);
    if (!inv) throw Undefined("comparison map for " + A + " over " + ctx + " is not invertible");
    return T.subst_ty(*inv, B);
}

Key transport_tm(const NMorphism& F, const Key& ctx, const Key& A, const Key& b) {
    const auto& T = *F.tgt;
    auto e = T.ext(F.obj(ctx), F.ty(ctx, A));
    Key tau = comparison(F, ctx, A);
    if (tau == T.identity(e.extended)) return b;
    auto inv = inverse(T, tau);
    if (!inv) throw Undefined("comparison map for " + A + " over " + ctx + " is not invertible");
    return T.subst_tm(*inv, b);
}

MorphismReport check_morphism(const NMorphism& F, bool strict, int bound) {
    const auto& S = *F.src;
    const auto& T = *F.tgt;
    MorphismReport out;
    out.report = Report("morphism " + F.name + (strict ? " (strict)" : " (weak)"), bound);
    out.base = Report("premorphism", bound);
    out.strict = Report("strict", bound);
    out.weak = Report("weak", bound);
    out.pullbacks = Report("image squares", bound);
    auto& b = out.base;
    HomCache hom(S);
    auto objs = S.objects(bound);
    auto guard = [](Report& r, const char* law, const std::string& where, auto&& fn) {
        try {
            fn();
        } catch (const std::exception& ex) {
            r.fail(law, where + ": " + ex.what());
        }
    };

    if (F.obj(S.empty()) != T.empty()) b.fail("terminal", "F(empty) = " + F.obj(S.empty()));
    for (const auto& G : objs) {
        const Key FG = F.obj(G);
        if (F.mor(S.identity(G)) != T.identity(FG)) b.fail("functor", "F(id " + G + ")");
        for (const auto& A : S.ty(G))
            guard(b, "types", A, [&] {
                if (!T.is_type(FG, F.ty(G, A))) b.fail("types", "F(" + A + ") not over " + FG);
            });
        for (const auto& a : S.tm(G))
            guard(b, "typing", a, [&] {
                Key Fa = F.tm(G, a);
                if (!T.is_term(FG, Fa)) b.fail("terms", "F(" + a + ") not over " + FG);
                else if (T.type_of(FG, Fa) != F.ty(G, S.type_of(G, a))) b.fail("typing", "at " + a + " over " + G);
            });
    }
    for (const auto& D : objs)
        for (const auto& G : objs)
            for (const auto& s : hom(D, G)) {
                Key Fs = F.mor(s);
                if (T.dom(Fs) != F.obj(D) || T.cod(Fs) != F.obj(G)) b.fail("functor", "F(" + s + ") has the wrong ends");
                for (const auto& U : objs)
                    for (const auto& t : hom(G, U))
                        if (F.mor(S.compose(t, s)) != T.compose(F.mor(t), Fs)) b.fail("functor", "F(" + t + " . " + s + ")");
                for (const auto& A : S.ty(G))
                    guard(b, "naturality", A, [&] {
                        if (F.ty(D, S.subst_ty(s, A)) != T.subst_ty(Fs, F.ty(G, A)))
                            b.fail("naturality", "types at " + A + sq(s));
                    });
                for (const auto& a : S.tm(G))
                    guard(b, "naturality", a, [&] {
                        if (F.tm(D, S.subst_tm(s, a)) != T.subst_tm(Fs, F.tm(G, a)))
                            b.fail("naturality", "terms at " + a + sq(s));
                    });
            }

    const int tb = T.bound();
    ModelPtr tgt = F.tgt;
    for (const auto& G : objs)
        for (const auto& A : S.ty(G)) {
            std::string where = G + "." + A;
            guard(out.strict, "strict", where, [&] {
                auto e = S.ext(G, A);
                auto fe = T.ext(F.obj(G), F.ty(G, A));
                if (F.obj(e.extended) != fe.extended) out.strict.fail("strict", "F(" + where + ") != FG.FA");
                else {
                    if (F.mor(e.proj) != fe.proj) out.strict.fail("strict", "F(p) != p at " + where);
                    if (F.tm(e.extended, e.var) != fe.var) out.strict.fail("strict", "F(q) != q at " + where);
                }
            });
            guard(out.weak, "weak", where, [&] {
                Key tau = comparison(F, G, A);
                if (!inverse(T, tau)) out.weak.fail("weak", "tau at " + where + " is not invertible");
            });
            guard(out.pullbacks, "image-square", where, [&] {
                auto e = S.ext(G, A);
                auto p = typing(tgt, tb);
                auto sqr = pullback_square_report(p, yoneda_element(p.cod, F.obj(G), F.ty(G, A)),
                                                  yoneda_element(p.dom, F.obj(e.extended), F.tm(e.extended, e.var)),
                                                  yoneda_map(tgt, tb, F.mor(e.proj)));
                if (!sqr.ok()) out.pullbacks.fail("image-square", where + ": " + sqr.violations.front().law);
            });
        }

    out.report.merge(b);
    out.report.merge(strict ? out.strict : out.weak);
    out.report.merge(out.pullbacks);
    if (out.pullbacks.ok() && !out.weak.ok())
        out.report.notes.push_back("image squares are pullbacks although some comparison map is not invertible");
    return out;
}

Report check_sigma_morphism(const NMorphism& F, const SigmaStructure& s, const SigmaStructure& t, int bound) {
    const auto& S = *F.src;
    const auto& T = *F.tgt;
    Report r("sigma preservation " + F.name, bound);
    for (const auto& G : S.objects(bound)) {
        const Key FG = F.obj(G);
        auto terms = S.tm(G);
        for (const auto& A : S.ty(G)) {
            auto e = S.ext(G, A);
            const Key FA = F.ty(G, A);
            for (const auto& B : S.ty(e.extended)) {
                std::string where = "Sigma(" + A + ", " + B + ") over " + G;
                try {
                    Key FB = transport_ty(F, G, A, F.ty(e.extended, B));
                    if (F.ty(G, s.sigma(G, A, B)) != t.sigma(FG, FA, FB)) r.fail("sigma", where);
                    for (const auto& a : terms) {
                        if (S.type_of(G, a) != A) continue;
                        Key Ba = S.subst_ty(section(S, G, A, a), B);
                        for (const auto& b : terms) {
                            if (S.type_of(G, b) != Ba) continue;
                            if (F.tm(G, s.pair(G, A, B, a, b)) != t.pair(FG, FA, FB, F.tm(G, a), F.tm(G, b)))
                                r.fail("pair", "(" + a + ", " + b + ") in " + where);
                        }
                    }
                } catch (const std::exception& ex) {
                    r.fail("sigma", where + ": " + ex.what());
                }
            }
        }
    }
    (void)T;
    return r;
}

Report check_unit_morphism(const NMorphism& F, const UnitStructure& s, const UnitStructure& t) {
    Report r("unit preservation " + F.name, 0);
    const Key E = F.src->empty();
    if (F.ty(E, s.unit) != t.unit) r.fail("unit", "F(unit) = " + F.ty(E, s.unit));
    if (F.tm(E, s.star) != t.star) r.fail("star", "F(star) = " + F.tm(E, s.star));
    return r;
}

std::optional<Classification> classify(const NaturalModel& m, const Key& s) {
    const Key D = m.dom(s), G = m.cod(s);
    for (const auto& A : m.ty(G)) {
        auto e = m.ext(G, A);
        for (const auto& h : m.hom(D, e.extended))
            if (m.compose(e.proj, h) == s && inverse(m, h)) return Classification{s, true, A, h};
    }
    return std::nullopt;
}

ClassifiedReport classified_morphisms(const NaturalModel& m, int bound) {
    ClassifiedReport out;
    out.report = Report("classified morphisms " + m.name(), bound);
    HomCache hom(m);
    auto objs = m.objects(bound);
    for (const auto& X : objs)
        for (const auto& G : objs)
            for (const auto& s : hom(X, G)) {
                auto c = classify(m, s);
                if (!c) {
                    out.entries.push_back(Classification{s, false, "", ""});
                    continue;
                }
                out.entries.push_back(*c);
                // pull back along every tau : D -> G and check the pasted square is a pullback
                Key hinv = *inverse(m, c->iso);
                for (const auto& D : objs)
                    for (const auto& tau : hom(D, G)) {
                        Key At = m.subst_ty(tau, c->type);
                        auto e = m.ext(D, At);
                        Key top = m.compose(hinv, canonical_pullback(m, tau, c->type));
                        Key left = e.proj;
                        std::string where = s + " along " + tau;
                        if (m.compose(s, top) != m.compose(tau, left)) {
                            out.report.fail("pullback-commutes", where);
                            continue;
                        }
                        if (!classify(m, left)) out.report.fail("pullback-classified", where);
                        for (const auto& Q : objs) {
                            auto& mids = hom(Q, e.extended);
                            for (const auto& q1 : hom(Q, D))
                                for (const auto& q2 : hom(Q, X)) {
                                    if (m.compose(tau, q1) != m.compose(s, q2)) continue;
                                    int n = 0;
                                    for (const auto& k : mids)
                                        if (m.compose(left, k) == q1 && m.compose(top, k) == q2) ++n;
                                    if (n != 1) out.report.fail("pullback-universal", where + " from " + Q);
                                }
                        }
                    }
            }
    return out;
}

}  // namespace natmod
