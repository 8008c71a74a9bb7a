#include "natmod/presheaf.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace natmod {

Presheaf yoneda(CatPtr base, int bound, const Key& c) {
    Presheaf P;
    P.base = base;
    P.bound = bound;
    P.name = "y" + c;
    P.values = [base, c](const Key& d) { return base->hom(d, c); };
    P.act = [base](const Key& f, const Key& x) { return base->compose(x, f); };
    return P;
}

NatTrans yoneda_map(CatPtr base, int bound, const Key& f) {
    NatTrans a;
    a.dom = yoneda(base, bound, base->dom(f));
    a.cod = yoneda(base, bound, base->cod(f));
    a.at = [base, f](const Key&, const Key& e) { return base->compose(f, e); };
    return a;
}

NatTrans yoneda_element(const Presheaf& P, const Key& c, const Key& x) {
    NatTrans a;
    a.dom = yoneda(P.base, P.bound, c);
    a.cod = P;
    auto act = P.act;
    a.at = [act, x](const Key&, const Key& e) { return act(e, x); };
    return a;
}

Presheaf terminal_presheaf(CatPtr base, int bound) {
    Presheaf P;
    P.base = base;
    P.bound = bound;
    P.name = "1";
    P.values = [](const Key&) { return std::vector<Key>{"*"}; };
    P.act = [](const Key&, const Key& x) { return x; };
    return P;
}

Presheaf empty_presheaf(CatPtr base, int bound) {
    Presheaf P;
    P.base = base;
    P.bound = bound;
    P.name = "0";
    P.values = [](const Key&) { return std::vector<Key>{}; };
    P.act = [](const Key&, const Key& x) -> Key { throw Undefined("empty presheaf has no element " + x); };
    return P;
}

NatTrans identity_nat(const Presheaf& P) {
    return NatTrans{P, P, [](const Key&, const Key& x) { return x; }};
}

NatTrans compose_nat(const NatTrans& g, const NatTrans& f) {
    auto ga = g.at, fa = f.at;
    return NatTrans{f.dom, g.cod, [ga, fa](const Key& c, const Key& x) { return ga(c, fa(c, x)); }};
}

NatTrans to_terminal_nat(const Presheaf& P) {
    return NatTrans{P, terminal_presheaf(P.base, P.bound), [](const Key&, const Key&) { return Key("*"); }};
}

Report check_presheaf(const Presheaf& P) {
    Report r("presheaf " + P.name, P.bound);
    const auto& C = *P.base;
    auto objs = P.fragment();
    std::map<Key, std::set<Key>> vals;
    for (const auto& c : objs) {
        auto v = P.values(c);
        vals[c] = std::set<Key>(v.begin(), v.end());
        if (vals[c].size() != v.size()) r.fail("values", "duplicate elements at " + c);
    }
    for (const auto& c : objs)
        for (const auto& x : vals[c])
            if (P.act(C.identity(c), x) != x) r.fail("identity", x + "[id " + c + "] != " + x);
    for (const auto& a : objs)
        for (const auto& b : objs)
            for (const auto& f : C.hom(a, b))
                for (const auto& c : objs) {
                    auto gs = C.hom(b, c);
                    for (const auto& x : vals[c])
                        for (const auto& g : gs) {
                            auto xg = P.act(g, x);
                            if (!vals[b].count(xg)) {
                                r.fail("typing", x + "[" + g + "] not in P(" + b + ")");
                                continue;
                            }
                            if (P.act(C.compose(g, f), x) != P.act(f, xg))
                                r.fail("composition", x + "[" + g + " . " + f + "]");
                        }
                }
    return r;
}

Report check_nattrans(const NatTrans& a) {
    Report r("natural transformation " + a.dom.name + " -> " + a.cod.name, a.dom.bound);
    const auto& C = *a.dom.base;
    auto objs = a.dom.fragment();
    std::map<Key, std::set<Key>> cod;
    for (const auto& c : objs) {
        auto v = a.cod.values(c);
        cod[c] = std::set<Key>(v.begin(), v.end());
    }
    for (const auto& c : objs)
        for (const auto& x : a.dom.values(c))
            if (!cod[c].count(a.at(c, x))) r.fail("typing", "component at " + c + " sends " + x + " outside the codomain");
    for (const auto& d : objs) {
        auto xs = a.dom.values(d);
        for (const auto& c : objs)
            for (const auto& f : C.hom(c, d))
                for (const auto& x : xs)
                    if (a.at(c, a.dom.act(f, x)) != a.cod.act(f, a.at(d, x)))
                        r.fail("naturality", "at " + f + " on " + x);
    }
    return r;
}

FinCat elements(const Presheaf& P) {
    const auto& C = *P.base;
    auto objs = P.fragment();
    FinCat E;
    std::map<Key, std::vector<Key>> vals;
    for (const auto& c : objs) {
        vals[c] = P.values(c);
        for (const auto& x : vals[c]) {
            Key o = tup({c, x});
            E.objs.push_back(o);
            E.ids[o] = tup({C.identity(c), x});
        }
    }
    // morphism (f, y) : (C, y[f]) -> (D, y)
    for (const auto& c : objs)
        for (const auto& d : objs)
            for (const auto& f : C.hom(c, d))
                for (const auto& y : vals[d]) E.homs[{tup({c, P.act(f, y)}), tup({d, y})}].push_back(tup({f, y}));
    E.reindex();
    for (const auto& a : objs)
        for (const auto& b : objs)
            for (const auto& f : C.hom(a, b))
                for (const auto& c : objs)
                    for (const auto& g : C.hom(b, c))
                        for (const auto& z : vals[c]) {
                            Key y = P.act(g, z);
                            E.comp[{tup({g, z}), tup({f, y})}] = tup({C.compose(g, f), z});
                        }
    return E;
}

Presheaf sum_presheaves(const Presheaf& P, const Presheaf& Q) {
    Presheaf S;
    S.base = P.base;
    S.bound = P.bound;
    S.name = P.name + "+" + Q.name;
    auto pv = P.values, qv = Q.values;
    auto pa = P.act, qa = Q.act;
    S.values = [pv, qv](const Key& c) {
        std::vector<Key> out;
        for (const auto& x : pv(c)) out.push_back(tup({"0", x}));
        for (const auto& y : qv(c)) out.push_back(tup({"1", y}));
        return out;
    };
    S.act = [pa, qa](const Key& f, const Key& z) {
        auto parts = split_tup(z);
        return parts[0] == "0" ? tup({"0", pa(f, parts[1])}) : tup({"1", qa(f, parts[1])});
    };
    return S;
}

NatTrans sum_nat(const NatTrans& a, const NatTrans& b) {
    auto aa = a.at, ba = b.at;
    return NatTrans{sum_presheaves(a.dom, b.dom), sum_presheaves(a.cod, b.cod), [aa, ba](const Key& c, const Key& z) {
                        auto parts = split_tup(z);
                        return parts[0] == "0" ? tup({"0", aa(c, parts[1])}) : tup({"1", ba(c, parts[1])});
                    }};
}

PresheafPullback pullback_presheaves(const NatTrans& x, const NatTrans& f) {
    Presheaf P;
    P.base = x.dom.base;
    P.bound = x.dom.bound;
    P.name = x.dom.name + "x" + f.dom.name;
    auto xv = x.dom.values, fv = f.dom.values;
    auto xa = x.at, fa = f.at;
    auto xact = x.dom.act, fact = f.dom.act;
    P.values = [xv, fv, xa, fa](const Key& c) {
        std::vector<Key> out;
        auto us = xv(c), vs = fv(c);
        for (const auto& u : us) {
            Key z = xa(c, u);
            for (const auto& v : vs)
                if (fa(c, v) == z) out.push_back(tup({u, v}));
        }
        return out;
    };
    P.act = [xact, fact](const Key& g, const Key& e) {
        auto uv = split_tup(e);
        return tup({xact(g, uv[0]), fact(g, uv[1])});
    };
    NatTrans left{P, x.dom, [](const Key&, const Key& e) { return split_tup(e)[0]; }};
    NatTrans top{P, f.dom, [](const Key&, const Key& e) { return split_tup(e)[1]; }};
    return {P, left, top};
}

namespace {

bool same_values(const Presheaf& a, const Presheaf& b, const Key& c) {
    auto u = a.values(c), v = b.values(c);
    std::sort(u.begin(), u.end());
    std::sort(v.begin(), v.end());
    return u == v;
}

// Pointwise bijectivity of P(D) -> X(D) x_Z(D) Y(D). Stops at the first failure
// when no report is supplied.
bool square_bijective(const NatTrans& f, const NatTrans& x, const NatTrans& top, const NatTrans& left, Report* r) {
    bool ok = true;
    for (const auto& D : top.dom.fragment()) {
        auto es = top.dom.values(D);
        std::set<std::pair<Key, Key>> image;
        for (const auto& e : es) {
            Key u = left.at(D, e), v = top.at(D, e);
            if (x.at(D, u) != f.at(D, v)) {
                ok = false;
                if (!r) return false;
                r->fail("commutes", "at " + D + " on " + e);
            }
            if (!image.emplace(u, v).second) {
                ok = false;
                if (!r) return false;
                r->fail("injective", "at " + D + " two elements map to (" + u + ", " + v + ")");
            }
        }
        std::map<Key, std::size_t> zx, zf;
        for (const auto& u : x.dom.values(D)) ++zx[x.at(D, u)];
        for (const auto& v : f.dom.values(D)) ++zf[f.at(D, v)];
        std::size_t target = 0;
        for (const auto& [z, n] : zx) {
            auto it = zf.find(z);
            if (it != zf.end()) target += n * it->second;
        }
        if (image.size() != target) {
            ok = false;
            if (!r) return false;
            r->fail("surjective", "at " + D + ": " + std::to_string(image.size()) + " of " + std::to_string(target) +
                                      " compatible pairs are hit");
        }
    }
    return ok;
}

}  // namespace

Report pullback_square_report(const NatTrans& f, const NatTrans& x, const NatTrans& top, const NatTrans& left) {
    if (f.dom.base != x.dom.base || f.dom.base != top.dom.base || f.dom.base != left.dom.base)
        throw MalformedInput("pullback square: transformations live over different bases");
    Report r("pullback square", top.dom.bound);
    for (const auto& D : top.dom.fragment()) {
        if (!same_values(f.cod, x.cod, D)) throw MalformedInput("pullback square: f and x have different codomains at " + D);
        if (!same_values(top.cod, f.dom, D)) throw MalformedInput("pullback square: top does not land in dom f at " + D);
        if (!same_values(left.cod, x.dom, D)) throw MalformedInput("pullback square: left does not land in dom x at " + D);
        if (!same_values(top.dom, left.dom, D)) throw MalformedInput("pullback square: top and left have different domains at " + D);
    }
    square_bijective(f, x, top, left, &r);
    return r;
}

bool check_pullback_square(const NatTrans& f, const NatTrans& x, const NatTrans& top, const NatTrans& left) {
    return pullback_square_report(f, x, top, left).ok();
}

RepresentabilityReport is_representable(const NatTrans& p, int witness_bound,
                                        const std::vector<Key>& extra_candidates) {
    RepresentabilityReport out;
    const auto base = p.dom.base;
    const auto& C = *base;
    const int bound = p.dom.bound;
    out.report = Report("representability of " + p.dom.name + " -> " + p.cod.name, bound);
    out.report.notes.push_back("witnesses searched up to size " + std::to_string(witness_bound));
    auto frag = p.dom.fragment();
    auto candidates = C.objects(witness_bound);
    for (const auto& B : extra_candidates)
        if (std::find(candidates.begin(), candidates.end(), B) == candidates.end()) candidates.push_back(B);
    if (!extra_candidates.empty()) out.report.notes.back() += " and among the chosen extensions";

    // Per fragment object: fibre sizes of p, reused by every (Gamma, A).
    std::map<Key, std::map<Key, std::size_t>> pfib;
    std::map<Key, std::vector<Key>> Yvals;
    for (const auto& D : frag) {
        Yvals[D] = p.dom.values(D);
        for (const auto& v : Yvals[D]) ++pfib[D][p.at(D, v)];
    }

    std::map<std::pair<Key, Key>, std::vector<Key>> homs;
    auto hom = [&](const Key& a, const Key& b) -> const std::vector<Key>& {
        auto it = homs.find({a, b});
        if (it == homs.end()) it = homs.emplace(std::make_pair(a, b), C.hom(a, b)).first;
        return it->second;
    };

    for (const auto& G : frag) {
        for (const auto& A : p.cod.values(G)) {
            Witness w;
            w.ctx = G;
            w.elem = A;
            // |{(h, v) : A[h] = p(v)}| at each D
            std::map<Key, std::size_t> target;
            for (const auto& D : frag) {
                std::size_t n = 0;
                for (const auto& h : hom(D, G)) {
                    auto it = pfib[D].find(p.cod.act(h, A));
                    if (it != pfib[D].end()) n += it->second;
                }
                target[D] = n;
            }
            for (const auto& B : candidates) {
                bool sizes = true;
                for (const auto& D : frag)
                    if (hom(D, B).size() != target[D]) {
                        sizes = false;
                        break;
                    }
                if (!sizes) continue;
                auto yB = p.dom.values(B);
                for (const auto& g : hom(B, G)) {
                    Key Ag = p.cod.act(g, A);
                    for (const auto& y : yB) {
                        if (p.at(B, y) != Ag) continue;
                        bool good = true;
                        for (const auto& D : frag) {
                            std::set<std::pair<Key, Key>> seen;
                            for (const auto& e : hom(D, B))
                                if (!seen.emplace(C.compose(g, e), p.dom.act(e, y)).second) {
                                    good = false;
                                    break;
                                }
                            if (!good) break;
                        }
                        if (!good) continue;
                        w.found = true;
                        w.obj = B;
                        w.mor = g;
                        w.var = y;
                        break;
                    }
                    if (w.found) break;
                }
                if (w.found) break;
            }
            if (w.found) {
                // Confirm the hit with the general oracle.
                auto sq = pullback_square_report(p, yoneda_element(p.cod, G, A), yoneda_element(p.dom, w.obj, w.var),
                                                 yoneda_map(base, bound, w.mor));
                if (!sq.ok()) {
                    w.found = false;
                    out.report.merge(sq, "(" + G + "," + A + ") ");
                }
            }
            if (!w.found) out.report.fail("no-witness", "no representing object for " + A + " over " + G);
            out.witnesses.push_back(std::move(w));
        }
    }
    return out;
}

}  // namespace natmod
