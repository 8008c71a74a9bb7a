#include "natmod/fincat.hpp"

#include <algorithm>
#include <set>

namespace natmod {

Key mor_key(const Key& dom, const Key& cod, const Key& payload) { return tup({dom, cod, payload}); }

std::vector<Key> mor_parts(const Key& f) {
    auto parts = split_tup(f);
    if (parts.size() != 3) throw MalformedInput("not a morphism key: " + f);
    return parts;
}

// ---- FinCat ----

void FinCat::reindex() {
    ends_.clear();
    for (const auto& [ends, fs] : homs)
        for (const auto& f : fs) ends_.emplace(f, ends);
}

std::vector<Key> FinCat::objects(int) const { return objs; }

std::vector<Key> FinCat::hom(const Key& src, const Key& dst) const {
    auto it = homs.find({src, dst});
    return it == homs.end() ? std::vector<Key>{} : it->second;
}

Key FinCat::compose(const Key& g, const Key& f) const {
    auto it = comp.find({g, f});
    if (it == comp.end()) throw MalformedInput("composite not tabulated: " + g + " . " + f);
    return it->second;
}

Key FinCat::identity(const Key& x) const {
    auto it = ids.find(x);
    if (it == ids.end()) throw MalformedInput("no identity for " + x);
    return it->second;
}

Key FinCat::dom(const Key& f) const {
    auto it = ends_.find(f);
    if (it == ends_.end()) throw MalformedInput("unknown morphism " + f);
    return it->second.first;
}

Key FinCat::cod(const Key& f) const {
    auto it = ends_.find(f);
    if (it == ends_.end()) throw MalformedInput("unknown morphism " + f);
    return it->second.second;
}

std::vector<Key> FinCat::morphisms() const {
    std::vector<Key> out;
    for (const auto& x : objs)
        for (const auto& y : objs) {
            auto it = homs.find({x, y});
            if (it != homs.end()) out.insert(out.end(), it->second.begin(), it->second.end());
        }
    return out;
}

bool FinCat::has_object(const Key& x) const {
    return std::find(objs.begin(), objs.end(), x) != objs.end();
}

FinCat materialize(const Category& c, int bound) {
    FinCat out;
    out.objs = c.objects(bound);
    std::set<Key> objset(out.objs.begin(), out.objs.end());
    for (const auto& x : out.objs) {
        out.ids[x] = c.identity(x);
        for (const auto& y : out.objs) out.homs[{x, y}] = c.hom(x, y);
    }
    for (const auto& x : out.objs)
        for (const auto& y : out.objs)
            for (const auto& z : out.objs)
                for (const auto& f : out.homs[{x, y}])
                    for (const auto& g : out.homs[{y, z}]) out.comp[{g, f}] = c.compose(g, f);
    auto t = c.terminal();
    if (t && objset.count(*t)) out.term = t;
    out.reindex();
    return out;
}

Report check_category(const FinCat& c) {
    Report r("category", static_cast<int>(c.objs.size()));
    std::set<Key> objset(c.objs.begin(), c.objs.end());
    std::map<Key, int> seen;
    for (const auto& [ends, fs] : c.homs) {
        if (!objset.count(ends.first) || !objset.count(ends.second))
            r.fail("hom-objects", "hom list (" + ends.first + "," + ends.second + ") names an unknown object");
        for (const auto& f : fs) ++seen[f];
    }
    for (const auto& [f, n] : seen)
        if (n != 1) r.fail("hom-disjoint", f + " appears in " + std::to_string(n) + " hom lists");

    auto homs = [&](const Key& x, const Key& y) { return c.hom(x, y); };
    auto lookup = [&](const Key& g, const Key& f) -> std::optional<Key> {
        auto it = c.comp.find({g, f});
        if (it == c.comp.end()) return std::nullopt;
        return it->second;
    };

    for (const auto& x : c.objs) {
        auto it = c.ids.find(x);
        if (it == c.ids.end()) {
            r.fail("identity", "no identity for " + x);
            continue;
        }
        auto hx = homs(x, x);
        if (std::find(hx.begin(), hx.end(), it->second) == hx.end())
            r.fail("identity", it->second + " is not in hom(" + x + "," + x + ")");
    }

    for (const auto& x : c.objs)
        for (const auto& y : c.objs)
            for (const auto& f : homs(x, y)) {
                auto ix = c.ids.find(x), iy = c.ids.find(y);
                if (ix != c.ids.end()) {
                    auto v = lookup(f, ix->second);
                    if (!v || *v != f) r.fail("unit-right", "(" + f + ", " + ix->second + ")");
                }
                if (iy != c.ids.end()) {
                    auto v = lookup(iy->second, f);
                    if (!v || *v != f) r.fail("unit-left", "(" + iy->second + ", " + f + ")");
                }
                for (const auto& z : c.objs) {
                    auto hxz = homs(x, z);
                    for (const auto& g : homs(y, z)) {
                        auto gf = lookup(g, f);
                        if (!gf) {
                            r.fail("composition-total", "(" + g + ", " + f + ") not tabulated");
                            continue;
                        }
                        if (std::find(hxz.begin(), hxz.end(), *gf) == hxz.end())
                            r.fail("composition-typed", "(" + g + ", " + f + ") lands outside hom(" + x + "," + z + ")");
                        for (const auto& w : c.objs)
                            for (const auto& h : homs(z, w)) {
                                auto hg = lookup(h, g);
                                auto lhs = hg ? lookup(*hg, f) : std::nullopt;
                                auto rhs = lookup(h, *gf);
                                if (!lhs || !rhs || *lhs != *rhs)
                                    r.fail("associativity", "(" + h + ", " + g + ", " + f + ")");
                            }
                    }
                }
            }

    if (c.term) {
        if (!objset.count(*c.term)) r.fail("terminal", *c.term + " is not an object");
        for (const auto& x : c.objs) {
            auto n = homs(x, *c.term).size();
            if (n != 1) r.fail("terminal", x + " has " + std::to_string(n) + " maps to " + *c.term);
        }
    }
    return r;
}

Report check_functor(const FinFunctor& F) {
    Report r("functor", static_cast<int>(F.source->objs.size()));
    const auto& S = *F.source;
    const auto& T = *F.target;
    auto fo = [&](const Key& x) -> std::optional<Key> {
        auto it = F.obj.find(x);
        if (it == F.obj.end()) return std::nullopt;
        return it->second;
    };
    auto fm = [&](const Key& f) -> std::optional<Key> {
        auto it = F.mor.find(f);
        if (it == F.mor.end()) return std::nullopt;
        return it->second;
    };
    for (const auto& x : S.objs) {
        auto y = fo(x);
        if (!y || !T.has_object(*y)) {
            r.fail("object-map", x + " has no image object");
            continue;
        }
        auto fid = fm(S.identity(x));
        if (!fid || *fid != T.identity(*y)) r.fail("identity", "F(id " + x + ") != id F(" + x + ")");
    }
    for (const auto& f : S.morphisms()) {
        auto Ff = fm(f);
        auto a = fo(S.dom(f)), b = fo(S.cod(f));
        if (!Ff || !a || !b) {
            r.fail("morphism-map", f + " has no image");
            continue;
        }
        auto h = T.hom(*a, *b);
        if (std::find(h.begin(), h.end(), *Ff) == h.end()) r.fail("morphism-map", "F(" + f + ") has the wrong ends");
    }
    for (const auto& [gf, v] : S.comp) {
        auto Fg = fm(gf.first), Ff = fm(gf.second), Fgf = fm(v);
        if (!Fg || !Ff || !Fgf) continue;
        auto it = T.comp.find({*Fg, *Ff});
        if (it == T.comp.end() || it->second != *Fgf)
            r.fail("composition", "F(" + gf.first + " . " + gf.second + ")");
    }
    if (F.preserves_terminal) {
        auto y = S.term ? fo(*S.term) : std::nullopt;
        if (!S.term || !T.term || !y || *y != *T.term) r.fail("terminal", "terminal object not preserved");
    }
    return r;
}

// ---- limits by cone enumeration ----

namespace {

template <class Commutes>
bool universal(const FinCat& c, const Key& X, const Key& Y, const Cone& cone, Commutes commutes) {
    for (const auto& Q : c.objs) {
        auto hp = c.hom(Q, cone.apex);
        for (const auto& q1 : c.hom(Q, X))
            for (const auto& q2 : c.hom(Q, Y)) {
                if (!commutes(q1, q2)) continue;
                int n = 0;
                for (const auto& m : hp)
                    if (c.compose(cone.left, m) == q1 && c.compose(cone.right, m) == q2 && ++n > 1) break;
                if (n != 1) return false;
            }
    }
    return true;
}

}  // namespace

bool is_pullback_cone(const FinCat& c, const Key& f, const Key& g, const Cone& cone) {
    if (c.compose(f, cone.left) != c.compose(g, cone.right)) return false;
    return universal(c, c.dom(f), c.dom(g), cone,
                     [&](const Key& q1, const Key& q2) { return c.compose(f, q1) == c.compose(g, q2); });
}

std::optional<Cone> pullback(const FinCat& c, const Key& f, const Key& g) {
    if (c.cod(f) != c.cod(g)) throw MalformedInput("pullback: " + f + " and " + g + " do not share a codomain");
    const Key X = c.dom(f), Y = c.dom(g);
    for (const auto& P : c.objs)
        for (const auto& l : c.hom(P, X))
            for (const auto& r : c.hom(P, Y)) {
                Cone cone{P, l, r};
                if (is_pullback_cone(c, f, g, cone)) return cone;
            }
    return std::nullopt;
}

std::optional<Cone> product(const FinCat& c, const Key& x, const Key& y) {
    auto any = [](const Key&, const Key&) { return true; };
    for (const auto& P : c.objs)
        for (const auto& l : c.hom(P, x))
            for (const auto& r : c.hom(P, y)) {
                Cone cone{P, l, r};
                if (universal(c, x, y, cone, any)) return cone;
            }
    return std::nullopt;
}

// ---- (Fin/I)^op ----

std::vector<Key> FinSliceOp::objects(int bound) const {
    std::vector<Key> out;
    std::vector<std::vector<int>> layer{{}};
    for (int len = 0; len <= bound; ++len) {
        for (const auto& w : layer) out.push_back(int_list(w));
        if (len == bound || n_ == 0) break;
        std::vector<std::vector<int>> next;
        for (const auto& w : layer)
            for (int i = 0; i < n_; ++i) {
                auto v = w;
                v.push_back(i);
                next.push_back(std::move(v));
            }
        layer = std::move(next);
    }
    return out;
}

std::vector<Key> FinSliceOp::hom(const Key& src, const Key& dst) const {
    auto v = parse_int_list(src), u = parse_int_list(dst);
    std::vector<std::vector<int>> choices(u.size());
    for (std::size_t k = 0; k < u.size(); ++k) {
        for (std::size_t j = 0; j < v.size(); ++j)
            if (v[j] == u[k]) choices[k].push_back(static_cast<int>(j));
        if (choices[k].empty()) return {};
    }
    std::vector<Key> out;
    std::vector<int> fn(u.size());
    std::vector<std::size_t> idx(u.size(), 0);
    while (true) {
        for (std::size_t k = 0; k < u.size(); ++k) fn[k] = choices[k][idx[k]];
        out.push_back(mor_key(src, dst, int_list(fn)));
        std::size_t k = u.size();
        while (k > 0) {
            --k;
            if (++idx[k] < choices[k].size()) break;
            idx[k] = 0;
            if (k == 0) return out;
        }
        if (u.empty()) return out;
    }
}

Key FinSliceOp::compose(const Key& g, const Key& f) const {
    auto fp = mor_parts(f), gp = mor_parts(g);
    if (fp[1] != gp[0]) throw Undefined("compose: " + g + " . " + f);
    auto ff = parse_int_list(fp[2]), gf = parse_int_list(gp[2]);
    std::vector<int> out(gf.size());
    for (std::size_t k = 0; k < gf.size(); ++k) out[k] = ff[gf[k]];
    return mor_key(fp[0], gp[1], int_list(out));
}

Key FinSliceOp::identity(const Key& x) const {
    auto n = parse_int_list(x).size();
    std::vector<int> id(n);
    for (std::size_t i = 0; i < n; ++i) id[i] = static_cast<int>(i);
    return mor_key(x, x, int_list(id));
}

Key FinSliceOp::dom(const Key& f) const { return mor_parts(f)[0]; }
Key FinSliceOp::cod(const Key& f) const { return mor_parts(f)[1]; }

Key FinSliceOp::morphism(const std::vector<int>& dom, const std::vector<int>& cod, const std::vector<int>& fn) {
    return mor_key(int_list(dom), int_list(cod), int_list(fn));
}

std::vector<int> FinSliceOp::function(const Key& f) { return parse_int_list(mor_parts(f)[2]); }

std::shared_ptr<FinCat> poset_category(const std::vector<std::vector<bool>>& le) {
    auto c = std::make_shared<FinCat>();
    const int n = static_cast<int>(le.size());
    auto arrow = [](int i, int j) { return std::to_string(i) + "<=" + std::to_string(j); };
    for (int i = 0; i < n; ++i) c->objs.push_back(std::to_string(i));
    for (int i = 0; i < n; ++i) {
        c->ids[c->objs[i]] = arrow(i, i);
        for (int j = 0; j < n; ++j)
            if (le[i][j]) c->homs[{c->objs[i], c->objs[j]}] = {arrow(i, j)};
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                if (le[i][j] && le[j][k]) c->comp[{arrow(j, k), arrow(i, j)}] = arrow(i, k);
    for (int t = 0; t < n; ++t) {
        bool top = true;
        for (int i = 0; i < n; ++i) top = top && le[i][t];
        if (top) {
            c->term = c->objs[t];
            break;
        }
    }
    c->reindex();
    return c;
}

}  // namespace natmod
