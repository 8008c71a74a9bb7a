#include "natmod/polyset.hpp"

#include "natmod/key.hpp"
#include "natmod/models.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace natmod::poly {

namespace {

std::string show(const Map& m) { return int_list(m); }

// All tuples (x_0, ..., x_{n-1}) with x_k < sizes[k], lexicographically.
std::vector<std::vector<int>> sections(const std::vector<int>& sizes) {
    std::vector<std::vector<int>> out;
    for (int s : sizes)
        if (s == 0) return out;
    std::vector<int> cur(sizes.size(), 0);
    while (true) {
        out.push_back(cur);
        int k = static_cast<int>(sizes.size()) - 1;
        while (k >= 0 && ++cur[k] == sizes[k]) cur[k--] = 0;
        if (k < 0) break;
    }
    return out;
}

int position(const std::vector<int>& xs, int x) {
    auto it = std::find(xs.begin(), xs.end(), x);
    if (it == xs.end()) throw std::logic_error("element not in fibre");
    return static_cast<int>(it - xs.begin());
}

Map invert_total(const Map& m, int cod, const char* what) {
    auto inv = invert(m, cod);
    if (!inv) throw Undefined(std::string(what) + " is not invertible");
    return *inv;
}

template <class T>
std::map<T, int> index_of(const std::vector<T>& xs) {
    std::map<T, int> out;
    for (std::size_t i = 0; i < xs.size(); ++i) out.emplace(xs[i], static_cast<int>(i));
    return out;
}

}  // namespace

bool is_map(const Map& m, int dom, int cod) {
    if (static_cast<int>(m.size()) != dom) return false;
    return std::all_of(m.begin(), m.end(), [&](int y) { return y >= 0 && y < cod; });
}

Map compose_maps(const Map& g, const Map& f) {
    Map out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = g.at(f[i]);
    return out;
}

Map identity_map(int n) {
    Map out(n);
    std::iota(out.begin(), out.end(), 0);
    return out;
}

std::optional<Map> invert(const Map& m, int cod) {
    if (static_cast<int>(m.size()) != cod) return std::nullopt;
    Map out(cod, -1);
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i] < 0 || m[i] >= cod || out[m[i]] != -1) return std::nullopt;
        out[m[i]] = static_cast<int>(i);
    }
    return out;
}

std::vector<int> fibre(const Map& m, int y) {
    std::vector<int> out;
    for (std::size_t i = 0; i < m.size(); ++i)
        if (m[i] == y) out.push_back(static_cast<int>(i));
    return out;
}

std::vector<std::pair<int, int>> pullback(const Map& f, const Map& g) {
    std::vector<std::pair<int, int>> out;
    for (std::size_t x = 0; x < f.size(); ++x)
        for (std::size_t y = 0; y < g.size(); ++y)
            if (f[x] == g[y]) out.emplace_back(static_cast<int>(x), static_cast<int>(y));
    return out;
}

// ---- polynomials ----

void Polynomial::validate() const {
    if (I < 0 || B < 0 || A < 0 || J < 0) throw MalformedInput("negative set size");
    if (!is_map(s, B, I)) throw MalformedInput("s is not a map B -> I");
    if (!is_map(f, B, A)) throw MalformedInput("f is not a map B -> A");
    if (!is_map(t, A, J)) throw MalformedInput("t is not a map A -> J");
}

std::string Polynomial::key() const {
    return tup({std::to_string(I), std::to_string(B), std::to_string(A), std::to_string(J), show(s), show(f),
                show(t)});
}

Polynomial from_map(int B, int A, const Map& f) {
    Polynomial p{1, B, A, 1, Map(B, 0), f, Map(A, 0)};
    p.validate();
    return p;
}

Polynomial identity_poly(int I) {
    return Polynomial{I, I, I, I, identity_map(I), identity_map(I), identity_map(I)};
}

Polynomial slice_reduction(const Polynomial& F) {
    F.validate();
    Map sf(F.B);
    for (int b = 0; b < F.B; ++b) sf[b] = F.s[b] * F.A + F.f[b];
    return from_map(F.B, F.I * F.A, sf);
}

// ---- extension ----

Family Extension::family() const {
    Family out;
    for (const auto& e : elems) out.push_back(static_cast<int>(e.size()));
    return out;
}

int Extension::find(int j, const Element& e) const {
    auto it = index.at(j).find(e);
    if (it == index.at(j).end()) throw std::logic_error("element not in extension");
    return it->second;
}

std::size_t Extension::total() const {
    std::size_t n = 0;
    for (const auto& e : elems) n += e.size();
    return n;
}

Extension extend(const Polynomial& F, const Family& X) {
    F.validate();
    if (static_cast<int>(X.size()) != F.I) throw MalformedInput("family is not indexed by I");
    Extension out;
    out.elems.resize(F.J);
    out.index.resize(F.J);
    for (int a = 0; a < F.A; ++a) {
        std::vector<int> sizes;
        for (int b : F.fibre_over(a)) sizes.push_back(X[F.s[b]]);
        for (auto& sec : sections(sizes)) out.elems[F.t[a]].push_back({a, std::move(sec)});
    }
    for (int j = 0; j < F.J; ++j) out.index[j] = index_of(out.elems[j]);
    return out;
}

bool is_family_map(const FamilyMap& h, const Family& X, const Family& Y) {
    if (h.size() != X.size() || X.size() != Y.size()) return false;
    for (std::size_t i = 0; i < X.size(); ++i)
        if (!is_map(h[i], X[i], Y[i])) return false;
    return true;
}

bool is_family_bijection(const FamilyMap& h, const Family& X, const Family& Y) {
    if (!is_family_map(h, X, Y)) return false;
    for (std::size_t i = 0; i < X.size(); ++i)
        if (!invert(h[i], Y[i])) return false;
    return true;
}

FamilyMap extend_map(const Polynomial& F, const Family& X, const Family& Y, const FamilyMap& h) {
    if (!is_family_map(h, X, Y)) throw MalformedInput("not a family map X -> Y");
    auto PX = extend(F, X), PY = extend(F, Y);
    FamilyMap out(F.J);
    for (int j = 0; j < F.J; ++j)
        for (const auto& e : PX.elems[j]) {
            Element img{e.a, {}};
            auto Ba = F.fibre_over(e.a);
            for (std::size_t k = 0; k < Ba.size(); ++k) img.sec.push_back(h[F.s[Ba[k]]][e.sec[k]]);
            out[j].push_back(PY.find(j, img));
        }
    return out;
}

// ---- composition ----

Composite compose(const Polynomial& G, const Polynomial& F) {
    F.validate();
    G.validate();
    if (F.J != G.I) throw MalformedInput("middle index sets differ");
    // F = (s, f, t) : I -> J over B -> A, G = (u, g, v) : J -> K over D -> C
    const Map &s = F.s, &f = F.f, &t = F.t, &u = G.s, &g = G.f, &v = G.t;
    Composite c;
    for (int d = 0; d < G.B; ++d)
        for (int a = 0; a < F.A; ++a)
            if (t[a] == u[d]) c.H.emplace_back(d, a);
    for (auto [d, a] : c.H) {
        c.h.push_back(d);
        c.k.push_back(a);
    }
    auto Hidx = index_of(c.H);

    for (int cc = 0; cc < G.A; ++cc) {
        auto Dc = fibre(g, cc);
        std::vector<std::vector<int>> choices;
        for (int d : Dc) choices.push_back(fibre(t, u[d]));
        std::vector<int> sizes;
        for (const auto& ch : choices) sizes.push_back(static_cast<int>(ch.size()));
        for (const auto& sec : sections(sizes)) {
            std::vector<int> m;
            for (std::size_t i = 0; i < sec.size(); ++i) m.push_back(choices[i][sec[i]]);
            c.M.emplace_back(cc, std::move(m));
        }
    }
    for (const auto& [cc, m] : c.M) c.w.push_back(cc);

    for (std::size_t mi = 0; mi < c.M.size(); ++mi) {
        const auto& [cc, m] = c.M[mi];
        auto Dc = fibre(g, cc);
        for (std::size_t i = 0; i < Dc.size(); ++i) {
            int li = static_cast<int>(c.L.size());
            c.L.emplace_back(static_cast<int>(mi), Dc[i]);
            c.q.push_back(static_cast<int>(mi));
            c.e.push_back(Hidx.at({Dc[i], m[i]}));
            for (int b : fibre(f, m[i])) {
                c.N.emplace_back(static_cast<int>(mi), Dc[i], b);
                c.p.push_back(li);
                c.n.push_back(b);
            }
        }
    }

    Polynomial& P = c.poly;
    P.I = F.I;
    P.J = G.J;
    P.B = static_cast<int>(c.N.size());
    P.A = static_cast<int>(c.M.size());
    P.s = compose_maps(s, c.n);
    P.f = compose_maps(c.q, c.p);
    P.t = compose_maps(v, c.w);
    P.validate();
    return c;
}

FamilyMap composite_witness(const Composite& GF, const Polynomial& G, const Polynomial& F, const Family& X) {
    auto lhs = extend(GF.poly, X);
    auto PF = extend(F, X);
    auto rhs = extend(G, PF.family());
    FamilyMap out(GF.poly.J);
    for (int k = 0; k < GF.poly.J; ++k)
        for (const auto& el : lhs.elems[k]) {
            const auto& [cc, m] = GF.M[el.a];
            auto Dc = fibre(G.f, cc);
            auto Nm = GF.poly.fibre_over(el.a);  // (d, b) in order
            Element img{cc, {}};
            std::size_t pos = 0;
            for (std::size_t i = 0; i < Dc.size(); ++i) {
                Element inner{m[i], {}};
                while (pos < Nm.size() && std::get<1>(GF.N[Nm[pos]]) == Dc[i]) inner.sec.push_back(el.sec[pos++]);
                img.sec.push_back(PF.find(G.s[Dc[i]], inner));
            }
            out[k].push_back(rhs.find(k, img));
        }
    return out;
}

Report check_composition(const Polynomial& G, const Polynomial& F, const Family& X, const Family& Y,
                         const FamilyMap& h) {
    Report r("composition", 0);
    try {
        auto GF = compose(G, F);
        auto lhs = extend(GF.poly, X).family();
        auto PFX = extend(F, X).family(), PFY = extend(F, Y).family();
        auto rhs = extend(G, PFX).family();
        if (lhs != rhs) {
            r.fail("sizes", "|P_GF(X)| and |P_G(P_F(X))| differ");
            return r;
        }
        auto w = composite_witness(GF, G, F, X);
        if (!is_family_bijection(w, lhs, rhs)) r.fail("bijection", "witness at X is not a bijection");
        auto wy = composite_witness(GF, G, F, Y);
        auto top = extend_map(GF.poly, X, Y, h);
        auto bottom = extend_map(G, PFX, PFY, extend_map(F, X, Y, h));
        for (int k = 0; k < GF.poly.J; ++k)
            if (compose_maps(wy[k], top[k]) != compose_maps(bottom[k], w[k]))
                r.fail("naturality", "square at k = " + std::to_string(k));
    } catch (const std::exception& ex) {
        r.fail("construction", ex.what());
    }
    return r;
}

// ---- Beck-Chevalley ----

bool Square::is_pullback() const {
    if (!is_map(f, B, A) || !is_map(v, B, D) || !is_map(u, A, C) || !is_map(g, D, C)) return false;
    if (compose_maps(u, f) != compose_maps(g, v)) return false;
    auto pb = pullback(u, g);
    if (pb.size() != static_cast<std::size_t>(B)) return false;
    std::vector<std::pair<int, int>> img;
    for (int b = 0; b < B; ++b) img.emplace_back(f[b], v[b]);
    std::sort(img.begin(), img.end());
    return std::adjacent_find(img.begin(), img.end()) == img.end() && img == pb;
}

BCWitness beck_chevalley_witness(const Square& sq, const Family& X) {
    if (!sq.is_pullback()) throw MalformedInput("square is not a pullback");
    if (static_cast<int>(X.size()) != sq.A) throw MalformedInput("family is not indexed by A");
    BCWitness w;
    for (int d = 0; d < sq.D; ++d) {
        auto Ad = fibre(sq.u, sq.g[d]);
        auto Bd = fibre(sq.v, d);
        // b in B_d over a in A_{g(d)}
        std::vector<int> over(Ad.size());
        for (std::size_t i = 0; i < Ad.size(); ++i)
            for (int b : Bd)
                if (sq.f[b] == Ad[i]) over[i] = b;

        std::vector<std::pair<int, int>> lhs, rhs;
        for (int a : Ad)
            for (int x = 0; x < X[a]; ++x) lhs.emplace_back(a, x);
        for (int b : Bd)
            for (int x = 0; x < X[sq.f[b]]; ++x) rhs.emplace_back(b, x);
        auto ridx = index_of(rhs);
        Map sig;
        for (auto [a, x] : lhs) sig.push_back(ridx.at({over[position(Ad, a)], x}));
        w.sigma.push_back(sig);
        w.sigma_size.push_back(static_cast<int>(lhs.size()));

        std::vector<int> lsz, rsz;
        for (int a : Ad) lsz.push_back(X[a]);
        for (int b : Bd) rsz.push_back(X[sq.f[b]]);
        auto lsec = sections(lsz);
        auto rsec = index_of(sections(rsz));
        Map pi;
        for (const auto& sec : lsec) {
            std::vector<int> img;
            for (int b : Bd) img.push_back(sec[position(Ad, sq.f[b])]);
            pi.push_back(rsec.at(img));
        }
        w.pi.push_back(pi);
        w.pi_size.push_back(static_cast<int>(lsec.size()));
    }
    return w;
}

Report check_beck_chevalley(const Square& sq, const Family& X, const Family& Y, const FamilyMap& h) {
    Report r("Beck-Chevalley", 0);
    BCWitness wx, wy;
    try {
        wx = beck_chevalley_witness(sq, X);
        wy = beck_chevalley_witness(sq, Y);
    } catch (const std::exception& ex) {
        r.fail("pullback", ex.what());
        return r;
    }
    if (!is_family_map(h, X, Y)) throw MalformedInput("not a family map X -> Y");
    for (int d = 0; d < sq.D; ++d) {
        auto Ad = fibre(sq.u, sq.g[d]);
        auto Bd = fibre(sq.v, d);
        std::string at = "d=" + std::to_string(d);
        if (!invert(wx.sigma[d], wx.sigma_size[d])) r.fail("sigma bijection", at);
        if (!invert(wx.pi[d], wx.pi_size[d])) r.fail("pi bijection", at);

        // naturality of the sum witness: (a, x) -> (a, h x) on both sides
        std::vector<std::pair<int, int>> lx, rx, ly, ry;
        for (int a : Ad)
            for (int x = 0; x < X[a]; ++x) lx.emplace_back(a, x);
        for (int b : Bd)
            for (int x = 0; x < X[sq.f[b]]; ++x) rx.emplace_back(b, x);
        for (int a : Ad)
            for (int y = 0; y < Y[a]; ++y) ly.emplace_back(a, y);
        for (int b : Bd)
            for (int y = 0; y < Y[sq.f[b]]; ++y) ry.emplace_back(b, y);
        auto lyi = index_of(ly), ryi = index_of(ry);
        for (std::size_t i = 0; i < lx.size(); ++i) {
            auto [a, x] = lx[i];
            int via_left = wy.sigma[d][lyi.at({a, h[a][x]})];
            auto [b, x2] = rx[wx.sigma[d][i]];
            int via_right = ryi.at({b, h[sq.f[b]][x2]});
            if (via_left != via_right) r.fail("sigma naturality", at);
        }

        std::vector<int> lxs, lys, rys;
        for (int a : Ad) lxs.push_back(X[a]), lys.push_back(Y[a]);
        for (int b : Bd) rys.push_back(Y[sq.f[b]]);
        auto lsec = sections(lxs);
        auto lyidx = index_of(sections(lys));
        auto rsecx = sections([&] {
            std::vector<int> z;
            for (int b : Bd) z.push_back(X[sq.f[b]]);
            return z;
        }());
        auto ryidx = index_of(sections(rys));
        for (std::size_t i = 0; i < lsec.size(); ++i) {
            std::vector<int> hl;
            for (std::size_t k = 0; k < Ad.size(); ++k) hl.push_back(h[Ad[k]][lsec[i][k]]);
            int via_left = wy.pi[d][lyidx.at(hl)];
            const auto& rs = rsecx[wx.pi[d][i]];
            std::vector<int> hr;
            for (std::size_t k = 0; k < Bd.size(); ++k) hr.push_back(h[sq.f[Bd[k]]][rs[k]]);
            if (via_left != ryidx.at(hr)) r.fail("pi naturality", at);
        }
    }
    return r;
}

// ---- distributivity ----

namespace {

struct DistSides {
    std::vector<std::vector<std::pair<int, int>>> left;           // per b in B_a, (c, x)
    std::vector<std::pair<std::vector<int>, std::vector<int>>> right;  // (m, xs)
};

DistSides dist_sides(const Map& u, const Map& f, int a, const Family& X) {
    DistSides out;
    auto Ba = fibre(f, a);
    std::vector<std::vector<std::pair<int, int>>> options;
    for (int b : Ba) {
        std::vector<std::pair<int, int>> o;
        for (int c : fibre(u, b))
            for (int x = 0; x < X[c]; ++x) o.emplace_back(c, x);
        options.push_back(o);
    }
    std::vector<int> sizes;
    for (const auto& o : options) sizes.push_back(static_cast<int>(o.size()));
    for (const auto& sec : sections(sizes)) {
        std::vector<std::pair<int, int>> el;
        for (std::size_t k = 0; k < sec.size(); ++k) el.push_back(options[k][sec[k]]);
        out.left.push_back(el);
    }
    std::vector<std::vector<int>> Cb;
    std::vector<int> csz;
    for (int b : Ba) {
        Cb.push_back(fibre(u, b));
        csz.push_back(static_cast<int>(Cb.back().size()));
    }
    for (const auto& ms : sections(csz)) {
        std::vector<int> m, xsz;
        for (std::size_t k = 0; k < ms.size(); ++k) {
            m.push_back(Cb[k][ms[k]]);
            xsz.push_back(X[m.back()]);
        }
        for (const auto& xs : sections(xsz)) out.right.emplace_back(m, xs);
    }
    return out;
}

}  // namespace

DistWitness distributivity_witness(const Map& u, int C, const Map& f, int B, int A, const Family& X) {
    if (!is_map(u, C, B) || !is_map(f, B, A)) throw MalformedInput("distributivity needs maps C -> B -> A");
    if (static_cast<int>(X.size()) != C) throw MalformedInput("family is not indexed by C");
    DistWitness w;
    for (int a = 0; a < A; ++a) {
        auto sides = dist_sides(u, f, a, X);
        auto ridx = index_of(sides.right);
        Map bij;
        for (const auto& el : sides.left) {
            std::vector<int> m, xs;
            for (auto [c, x] : el) {
                m.push_back(c);
                xs.push_back(x);
            }
            bij.push_back(ridx.at({m, xs}));
        }
        w.left_size.push_back(static_cast<int>(sides.left.size()));
        w.right_size.push_back(static_cast<int>(sides.right.size()));
        w.bijection.push_back(bij);
    }
    return w;
}

Report check_distributivity(const Map& u, int C, const Map& f, int B, int A, const Family& X, const Family& Y,
                            const FamilyMap& h) {
    Report r("distributivity", 0);
    if (!is_family_map(h, X, Y)) throw MalformedInput("not a family map X -> Y");
    auto wx = distributivity_witness(u, C, f, B, A, X);
    auto wy = distributivity_witness(u, C, f, B, A, Y);
    for (int a = 0; a < A; ++a) {
        std::string at = "a=" + std::to_string(a);
        if (wx.left_size[a] != wx.right_size[a] || !invert(wx.bijection[a], wx.right_size[a]))
            r.fail("bijection", at);
        auto sx = dist_sides(u, f, a, X), sy = dist_sides(u, f, a, Y);
        auto lyi = index_of(sy.left);
        auto ryi = index_of(sy.right);
        for (std::size_t i = 0; i < sx.left.size(); ++i) {
            auto hl = sx.left[i];
            for (auto& [c, x] : hl) x = h[c][x];
            int via_left = wy.bijection[a][lyi.at(hl)];
            auto [m, xs] = sx.right[wx.bijection[a][i]];
            for (std::size_t k = 0; k < m.size(); ++k) xs[k] = h[m[k]][xs[k]];
            if (via_left != ryi.at({m, xs})) r.fail("naturality", at);
        }
    }
    return r;
}

// ---- correspondences ----

namespace {

void require_one_to_one(const Polynomial& F) {
    F.validate();
    if (F.I != 1 || F.J != 1) throw MalformedInput("expected a polynomial from 1 to 1");
}

}  // namespace

Pairing lemma5(const Polynomial& F, int X, const Map& g) {
    require_one_to_one(F);
    auto P = extend(F, {X});
    if (!is_map(g, static_cast<int>(g.size()), static_cast<int>(P.elems[0].size())))
        throw MalformedInput("g does not land in P_f(X)");
    Pairing out;
    for (int el : g) out.g1.push_back(P.elems[0][el].a);
    out.domain = pullback(out.g1, F.f);
    for (auto [y, b] : out.domain) {
        const auto& el = P.elems[0][g[y]];
        out.g2.push_back(el.sec[position(F.fibre_over(el.a), b)]);
    }
    return out;
}

Map lemma5_inverse(const Polynomial& F, int X, const Pairing& p) {
    require_one_to_one(F);
    if (!is_map(p.g1, static_cast<int>(p.g1.size()), F.A)) throw MalformedInput("g1 does not land in A");
    if (p.domain != pullback(p.g1, F.f)) throw MalformedInput("domain is not the pullback of f along g1");
    if (!is_map(p.g2, static_cast<int>(p.domain.size()), X)) throw MalformedInput("g2 does not land in X");
    auto P = extend(F, {X});
    auto didx = index_of(p.domain);
    Map g;
    for (std::size_t y = 0; y < p.g1.size(); ++y) {
        Element el{p.g1[y], {}};
        for (int b : F.fibre_over(el.a)) el.sec.push_back(p.g2[didx.at({static_cast<int>(y), b})]);
        g.push_back(P.find(0, el));
    }
    return g;
}

std::vector<std::tuple<int, std::vector<int>, int, int>> quadruple_object(const Polynomial& F) {
    require_one_to_one(F);
    std::vector<std::tuple<int, std::vector<int>, int, int>> out;
    for (int a = 0; a < F.A; ++a) {
        auto Ba = F.fibre_over(a);
        for (const auto& m : sections(std::vector<int>(Ba.size(), F.A)))
            for (std::size_t k = 0; k < Ba.size(); ++k)
                for (int b2 : F.fibre_over(m[k])) out.emplace_back(a, m, Ba[k], b2);
    }
    return out;
}

Quadruple lemma11_5(const Polynomial& F, const Map& g) {
    auto Q = quadruple_object(F);
    if (!is_map(g, static_cast<int>(g.size()), static_cast<int>(Q.size())))
        throw MalformedInput("g does not land in the quadruple object");
    Quadruple out;
    for (int el : g) {
        const auto& [a, m, b, b2] = Q[el];
        out.g1.push_back(a);
        out.g3.push_back(b);
        out.g4.push_back(b2);
    }
    out.domain = pullback(out.g1, F.f);
    for (auto [y, b] : out.domain) {
        const auto& [a, m, b0, b2] = Q[g[y]];
        out.g2.push_back(m[position(F.fibre_over(a), b)]);
    }
    return out;
}

Map lemma11_5_inverse(const Polynomial& F, const Quadruple& q) {
    auto Q = quadruple_object(F);
    auto qidx = index_of(Q);
    const int Y = static_cast<int>(q.g1.size());
    if (!is_map(q.g1, Y, F.A) || !is_map(q.g3, Y, F.B) || !is_map(q.g4, Y, F.B))
        throw MalformedInput("quadruple components have the wrong shape");
    if (q.domain != pullback(q.g1, F.f)) throw MalformedInput("domain is not the pullback of f along g1");
    if (!is_map(q.g2, static_cast<int>(q.domain.size()), F.A)) throw MalformedInput("g2 does not land in A");
    auto didx = index_of(q.domain);
    Map g;
    for (int y = 0; y < Y; ++y) {
        int a = q.g1[y];
        if (F.f[q.g3[y]] != a) throw MalformedInput("g3 is not a map over A");
        std::vector<int> m;
        for (int b : F.fibre_over(a)) m.push_back(q.g2[didx.at({y, b})]);
        if (F.f[q.g4[y]] != q.g2[didx.at({y, q.g3[y]})]) throw MalformedInput("g4 is not a map over A");
        g.push_back(qidx.at({a, m, q.g3[y], q.g4[y]}));
    }
    return g;
}

// ---- morphisms ----

bool PolyMorphism::cartesian() const { return invert(phi2, dom.B).has_value(); }

Report PolyMorphism::check(const std::string& name) const {
    Report r(name, 0);
    try {
        dom.validate();
        cod.validate();
    } catch (const std::exception& ex) {
        r.fail("shape", ex.what());
        return r;
    }
    if (dom.I != cod.I || dom.J != cod.J) {
        r.fail("shape", "source and target have different index sets");
        return r;
    }
    if (!is_map(phi0, dom.A, cod.A) || !is_map(phi1, size(), cod.B) || !is_map(phi2, size(), dom.B)) {
        r.fail("shape", "component maps have the wrong shape");
        return r;
    }
    if (compose_maps(cod.t, phi0) != dom.t) r.fail("commute", "v . phi0 != t");
    std::vector<std::pair<int, int>> seen;
    for (int x = 0; x < size(); ++x) {
        auto [a, d] = carrier[x];
        std::string at = "x=" + std::to_string(x);
        if (phi1[x] != d) r.fail("commute", at + ": phi1 is not the projection");
        if (dom.f[phi2[x]] != a) r.fail("commute", at + ": f . phi2 is not the projection");
        if (dom.s[phi2[x]] != cod.s[d]) r.fail("commute", at + ": s . phi2 != u . phi1");
        seen.emplace_back(a, d);
    }
    std::sort(seen.begin(), seen.end());
    if (seen != pullback(phi0, cod.f)) r.fail("pullback", "D_phi is not the pullback of g along phi0");
    return r;
}

PolyMorphism make_morphism(const Polynomial& F, const Polynomial& G, const Map& phi0, const Map& phi2) {
    PolyMorphism m{F, G, {}, phi0, {}, phi2};
    if (is_map(phi0, F.A, G.A)) m.carrier = pullback(phi0, G.f);
    for (auto [a, d] : m.carrier) m.phi1.push_back(d);
    auto r = m.check();
    if (!r.ok()) throw MalformedInput("not a morphism of polynomials: " + r.text());
    return m;
}

PolyMorphism from_square(const Polynomial& F, const Polynomial& G, const Map& phi0, const Map& sq) {
    if (!is_map(phi0, F.A, G.A) || !is_map(sq, F.B, G.B)) throw MalformedInput("square maps have the wrong shape");
    auto pb = pullback(phi0, G.f);
    auto pidx = index_of(pb);
    Map phi2(pb.size(), -1);
    for (int b = 0; b < F.B; ++b) {
        if (G.f[sq[b]] != phi0[F.f[b]]) throw MalformedInput("square does not commute");
        int x = pidx.at({F.f[b], sq[b]});
        if (phi2[x] != -1) throw MalformedInput("square is not a pullback");
        phi2[x] = b;
    }
    if (std::find(phi2.begin(), phi2.end(), -1) != phi2.end()) throw MalformedInput("square is not a pullback");
    return make_morphism(F, G, phi0, phi2);
}

Map square_map(const PolyMorphism& phi) {
    return compose_maps(phi.phi1, invert_total(phi.phi2, phi.dom.B, "phi2"));
}

PolyMorphism identity_cell(const Polynomial& F) { return from_square(F, F, identity_map(F.A), identity_map(F.B)); }

PolyMorphism vertical(const PolyMorphism& psi, const PolyMorphism& phi) {
    if (!(phi.cod == psi.dom)) throw MalformedInput("cells are not composable");
    Map phi0 = compose_maps(psi.phi0, phi.phi0);
    auto psi_idx = index_of(psi.carrier);
    auto phi_idx = index_of(phi.carrier);
    Map phi2;
    for (auto [a, d2] : pullback(phi0, psi.cod.f)) {
        int d = psi.phi2[psi_idx.at({phi.phi0[a], d2})];
        phi2.push_back(phi.phi2[phi_idx.at({a, d})]);
    }
    return make_morphism(phi.dom, psi.cod, phi0, phi2);
}

PolyMorphism horizontal(const PolyMorphism& psi, const PolyMorphism& phi) {
    const Polynomial &F = phi.dom, &F2 = phi.cod, &G = psi.dom, &G2 = psi.cod;
    Map fsq = square_map(phi), gsq = square_map(psi);
    auto GF = compose(G, F), GF2 = compose(G2, F2);
    auto Midx = index_of(GF2.M);
    auto Nidx = index_of(GF2.N);
    Map m0, m1;
    for (const auto& [c, m] : GF.M) {
        auto Dc = fibre(G.f, c);
        int c2 = psi.phi0[c];
        std::vector<int> m2(Dc.size());
        auto Dc2 = fibre(G2.f, c2);
        if (Dc2.size() != Dc.size()) throw MalformedInput("psi is not cartesian");
        for (std::size_t i = 0; i < Dc.size(); ++i) m2[position(Dc2, gsq[Dc[i]])] = phi.phi0[m[i]];
        m0.push_back(Midx.at({c2, m2}));
    }
    for (const auto& [mi, d, b] : GF.N) m1.push_back(Nidx.at({m0[mi], gsq[d], fsq[b]}));
    return from_square(GF.poly, GF2.poly, m0, m1);
}

PolyMorphism whisker_left(const Polynomial& G, const PolyMorphism& phi) { return horizontal(identity_cell(G), phi); }

PolyMorphism whisker_right(const PolyMorphism& psi, const Polynomial& F) { return horizontal(psi, identity_cell(F)); }

FamilyMap induced(const PolyMorphism& phi, const Family& X) {
    auto PF = extend(phi.dom, X), PG = extend(phi.cod, X);
    auto cidx = index_of(phi.carrier);
    FamilyMap out(phi.dom.J);
    for (int j = 0; j < phi.dom.J; ++j)
        for (const auto& el : PF.elems[j]) {
            Element img{phi.phi0[el.a], {}};
            auto Ba = phi.dom.fibre_over(el.a);
            for (int d : phi.cod.fibre_over(img.a)) {
                int b = phi.phi2[cidx.at({el.a, d})];
                img.sec.push_back(el.sec[position(Ba, b)]);
            }
            out[j].push_back(PG.find(j, img));
        }
    return out;
}

bool same_cell(const PolyMorphism& a, const PolyMorphism& b) {
    return a.dom == b.dom && a.cod == b.cod && a.carrier == b.carrier && a.phi0 == b.phi0 && a.phi1 == b.phi1 &&
           a.phi2 == b.phi2;
}

PolyMorphism cell_from_natural(const Polynomial& F, const Polynomial& G, const NaturalMap& w) {
    if (F.I != G.I || F.J != G.J) throw MalformedInput("polynomials have different index sets");
    Family terminal(F.I, 1);
    auto PT = extend(F, terminal), GT = extend(G, terminal);
    auto wT = w(terminal);
    Map phi0(F.A);
    for (int j = 0; j < F.J; ++j)
        for (std::size_t i = 0; i < PT.elems[j].size(); ++i) phi0[PT.elems[j][i].a] = GT.elems[j][wT[j][i]].a;

    // X_i = s^-1(i); the element (a, inclusion of B_a) is generic
    Family generic(F.I, 0);
    for (int b = 0; b < F.B; ++b) ++generic[F.s[b]];
    auto PX = extend(F, generic), GX = extend(G, generic);
    auto wX = w(generic);
    Map phi2;
    auto carrier = pullback(phi0, G.f);
    for (auto [a, d] : carrier) {
        Element el{a, {}};
        for (int b : F.fibre_over(a)) el.sec.push_back(position(fibre(F.s, F.s[b]), b));
        int j = F.t[a];
        const auto& img = GX.elems[j][wX[j][PX.find(j, el)]];
        int x = img.sec[position(G.fibre_over(img.a), d)];
        phi2.push_back(fibre(F.s, G.s[d])[x]);
    }
    return make_morphism(F, G, phi0, phi2);
}

namespace {

FamilyMap invert_family(const FamilyMap& h, const Family& cod) {
    FamilyMap out;
    for (std::size_t i = 0; i < h.size(); ++i) out.push_back(invert_total(h[i], cod[i], "witness"));
    return out;
}

FamilyMap compose_family(const FamilyMap& g, const FamilyMap& f) {
    FamilyMap out;
    for (std::size_t i = 0; i < f.size(); ++i) out.push_back(compose_maps(g[i], f[i]));
    return out;
}

// P_i(Y) -> Y, (j, [y]) |-> y
FamilyMap identity_extension_iso(int I, const Family& Y) {
    auto P = extend(identity_poly(I), Y);
    FamilyMap out(I);
    for (int j = 0; j < I; ++j)
        for (const auto& el : P.elems[j]) out[j].push_back(el.sec.at(0));
    return out;
}

}  // namespace

PolyMorphism associator(const Polynomial& H, const Polynomial& G, const Polynomial& F) {
    auto HG = compose(H, G);
    auto HG_F = compose(HG.poly, F);
    auto GF = compose(G, F);
    auto H_GF = compose(H, GF.poly);
    NaturalMap w = [&](const Family& X) {
        auto PF = extend(F, X);
        auto w1 = compose_family(composite_witness(HG, H, G, PF.family()), composite_witness(HG_F, HG.poly, F, X));
        auto PGF = extend(GF.poly, X);
        auto PGPF = extend(G, PF.family());
        auto inner = extend_map(H, PGF.family(), PGPF.family(), composite_witness(GF, G, F, X));
        auto w2 = compose_family(inner, composite_witness(H_GF, H, GF.poly, X));
        return compose_family(invert_family(w2, extend(H, PGPF.family()).family()), w1);
    };
    return cell_from_natural(HG_F.poly, H_GF.poly, w);
}

PolyMorphism left_unitor(const Polynomial& F) {
    auto i = identity_poly(F.J);
    auto iF = compose(i, F);
    NaturalMap w = [&](const Family& X) {
        auto PF = extend(F, X);
        auto to_iPF = invert_family(identity_extension_iso(F.J, PF.family()), PF.family());
        auto wit = composite_witness(iF, i, F, X);
        return compose_family(invert_family(wit, extend(i, PF.family()).family()), to_iPF);
    };
    return cell_from_natural(F, iF.poly, w);
}

PolyMorphism right_unitor(const Polynomial& F) {
    auto i = identity_poly(F.I);
    auto Fi = compose(F, i);
    NaturalMap w = [&](const Family& X) {
        auto Pi = extend(i, X);
        auto down = extend_map(F, Pi.family(), X, identity_extension_iso(F.I, X));
        auto wit = compose_family(down, composite_witness(Fi, F, i, X));
        return invert_family(wit, extend(F, X).family());
    };
    return cell_from_natural(F, Fi.poly, w);
}

// ---- adjustments ----

std::vector<Map> all_adjustments(const PolyMorphism& phi, const PolyMorphism& psi) {
    if (!(phi.dom == psi.dom) || !(phi.cod == psi.cod)) throw MalformedInput("cells are not parallel");
    std::vector<std::vector<int>> options;
    std::vector<int> sizes;
    for (int x = 0; x < phi.size(); ++x) {
        options.push_back(fibre(psi.phi2, phi.phi2[x]));
        sizes.push_back(static_cast<int>(options.back().size()));
    }
    std::vector<Map> out;
    for (const auto& sec : sections(sizes)) {
        Map alpha;
        for (std::size_t x = 0; x < sec.size(); ++x) alpha.push_back(options[x][sec[x]]);
        out.push_back(alpha);
    }
    return out;
}

Adjustment unique_adjustment(const PolyMorphism& phi, const PolyMorphism& psi) {
    if (!(phi.dom == psi.dom) || !(phi.cod == psi.cod)) throw MalformedInput("cells are not parallel");
    if (!psi.cartesian()) throw Undefined("target cell is not cartesian");
    Map inv = invert_total(psi.phi2, psi.dom.B, "psi2");
    return {phi, psi, compose_maps(inv, phi.phi2)};
}

// ---- pseudomonad data ----

PseudomonadReport check_pseudomonad_data(const Polynomial& p, const PolyMorphism& eta, const PolyMorphism& mu) {
    PseudomonadReport out;
    Report& r = out.report;
    r.name = "pseudomonad data";
    try {
        p.validate();
    } catch (const std::exception& ex) {
        r.fail("p", ex.what());
        return out;
    }
    if (p.I != p.J) {
        r.fail("p", "not an endo-polynomial");
        return out;
    }
    auto pp = compose(p, p);
    auto cell_ok = [&](const PolyMorphism& c, const Polynomial& dom, const Polynomial& cod, const std::string& name) {
        auto rc = c.check(name);
        r.merge(rc, name + ": ");
        if (!(c.dom == dom) || !(c.cod == cod)) r.fail(name, "wrong source or target");
        if (!c.cartesian()) r.fail(name, "not cartesian");
        return rc.ok() && c.dom == dom && c.cod == cod && c.cartesian();
    };
    bool ok = cell_ok(eta, identity_poly(p.I), p, "eta");
    ok = cell_ok(mu, pp.poly, p, "mu") && ok;
    if (!ok) return out;

    auto adjust = [&](const PolyMorphism& a, const PolyMorphism& b, const std::string& name) -> std::optional<Adjustment> {
        if (!a.cartesian() || !b.cartesian()) {
            r.fail(name, "coherence composite is not cartesian");
            return std::nullopt;
        }
        if (!(a.dom == b.dom) || !(a.cod == b.cod)) {
            r.fail(name, "coherence composites are not parallel");
            return std::nullopt;
        }
        auto all = all_adjustments(a, b);
        if (all.size() != 1) r.fail(name, std::to_string(all.size()) + " adjustments");
        auto adj = unique_adjustment(a, b);
        if (!invert(adj.alpha, b.size())) r.fail(name, "adjustment is not invertible");
        if (compose_maps(b.phi2, adj.alpha) != a.phi2) r.fail(name, "adjustment triangle fails");
        return adj;
    };

    try {
        auto left = vertical(mu, vertical(whisker_left(p, mu), associator(p, p, p)));
        auto right = vertical(mu, whisker_right(mu, p));
        out.alpha = adjust(left, right, "alpha");
    } catch (const std::exception& ex) {
        r.fail("alpha", ex.what());
    }
    try {
        auto lu = left_unitor(p);
        auto via = vertical(mu, vertical(whisker_right(eta, p), lu));
        out.lambda = adjust(via, identity_cell(p), "lambda");
        if (!invert(lu.phi0, lu.cod.A)) r.fail("unit-law", "sum over A of 1 is not isomorphic to A");
    } catch (const std::exception& ex) {
        r.fail("lambda", ex.what());
    }
    try {
        auto ru = right_unitor(p);
        auto via = vertical(mu, vertical(whisker_left(p, eta), ru));
        out.rho = adjust(via, identity_cell(p), "rho");
        if (!invert(ru.phi0, ru.cod.A)) r.fail("unit-law", "sum over 1 of A is not isomorphic to A");
    } catch (const std::exception& ex) {
        r.fail("rho", ex.what());
    }
    return out;
}

MonadData classifier_monad(const FamProp& m) {
    const Key one = m.empty();
    auto types = m.ty(one);
    auto tidx = index_of(types);
    std::vector<std::pair<Key, Key>> terms;  // (A, a)
    for (const auto& a : m.tm(one)) terms.emplace_back(m.type_of(one, a), a);
    std::sort(terms.begin(), terms.end(), [&](const auto& x, const auto& y) {
        return std::make_pair(tidx.at(x.first), x.second) < std::make_pair(tidx.at(y.first), y.second);
    });
    auto bidx = index_of(terms);
    Map f;
    for (const auto& [A, a] : terms) f.push_back(tidx.at(A));
    MonadData out{from_map(static_cast<int>(terms.size()), static_cast<int>(types.size()), f), {}, {}};
    const Polynomial& p = out.p;

    auto u = m.unit();
    out.eta = from_square(identity_poly(1), p, {tidx.at(u.unit)}, {bidx.at({u.unit, u.star})});

    // (A, m) |-> Sigma(A, B) with B read off m along the points of 1.A
    auto s = m.sigma();
    auto pp = compose(p, p);
    Map mu0, mu1;
    std::vector<Key> Bs;
    for (const auto& [c, mv] : pp.M) {
        const Key& A = types[c];
        std::vector<int> bits;
        for (int b : mv) bits.push_back(parse_int_list(types[b]).at(0));
        Key B = int_list(bits);
        Bs.push_back(B);
        mu0.push_back(tidx.at(s.sigma(one, A, B)));
    }
    for (const auto& [mi, d, b] : pp.N) {
        const Key& A = types[pp.M[mi].first];
        Key pr = s.pair(one, A, Bs[mi], terms[d].second, terms[b].second);
        mu1.push_back(bidx.at({types[mu0[mi]], pr}));
    }
    out.mu = from_square(pp.poly, p, mu0, mu1);
    return out;
}

MonadData trivial_monad() {
    auto p = from_map(1, 1, {0});
    auto pp = compose(p, p);
    return {p, from_square(identity_poly(1), p, {0}, {0}), from_square(pp.poly, p, {0}, {0})};
}

// ---- random instances ----

namespace {

int uniform(std::mt19937& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

Map random_map(std::mt19937& rng, int dom, int cod) {
    Map m(dom);
    for (auto& y : m) y = uniform(rng, 0, cod - 1);
    return m;
}

}  // namespace

Polynomial random_polynomial(std::mt19937& rng, int max_size, int I, int J) {
    Polynomial p;
    p.I = I;
    p.J = J;
    p.A = uniform(rng, 1, max_size);
    p.B = uniform(rng, 0, max_size);
    p.s = random_map(rng, p.B, I);
    p.f = random_map(rng, p.B, p.A);
    p.t = random_map(rng, p.A, J);
    p.validate();
    return p;
}

Family random_family(std::mt19937& rng, int n, int max_size) {
    Family X(n);
    for (auto& x : X) x = uniform(rng, 0, max_size);
    return X;
}

FamilyMap random_family_map(std::mt19937& rng, const Family& X, const Family& Y) {
    FamilyMap h;
    for (std::size_t i = 0; i < X.size(); ++i) {
        if (X[i] > 0 && Y[i] == 0) throw MalformedInput("no map into an empty set");
        h.push_back(random_map(rng, X[i], Y[i]));
    }
    return h;
}

Family random_target(std::mt19937& rng, const Family& X, int max_size) {
    Family Y = random_family(rng, static_cast<int>(X.size()), max_size);
    for (std::size_t i = 0; i < X.size(); ++i)
        if (X[i] > 0 && Y[i] == 0) Y[i] = 1;
    return Y;
}

Square random_pullback_square(std::mt19937& rng, int max_size) {
    Square sq;
    sq.A = uniform(rng, 1, max_size);
    sq.C = uniform(rng, 1, max_size);
    sq.D = uniform(rng, 1, max_size);
    sq.u = random_map(rng, sq.A, sq.C);
    sq.g = random_map(rng, sq.D, sq.C);
    auto pb = pullback(sq.u, sq.g);
    sq.B = static_cast<int>(pb.size());
    for (auto [a, d] : pb) {
        sq.f.push_back(a);
        sq.v.push_back(d);
    }
    return sq;
}

std::pair<PolyMorphism, PolyMorphism> random_cartesian_pair(std::mt19937& rng, int max_size) {
    auto G = random_polynomial(rng, max_size);
    int A = uniform(rng, 1, max_size);
    Map phi0 = random_map(rng, A, G.A);
    auto pb = pullback(phi0, G.f);
    Polynomial F{1, static_cast<int>(pb.size()), A, 1, Map(pb.size(), 0), {}, Map(A, 0)};
    Map sq;
    for (auto [a, d] : pb) {
        F.f.push_back(a);
        sq.push_back(d);
    }
    auto phi = from_square(F, G, phi0, sq);
    Map phi2 = phi.phi2;
    for (int a = 0; a < A; ++a) {
        auto xs = fibre(F.f, a);
        Map vals;
        for (int x : xs) vals.push_back(phi2[x]);
        std::shuffle(vals.begin(), vals.end(), rng);
        for (std::size_t k = 0; k < xs.size(); ++k) phi2[xs[k]] = vals[k];
    }
    return {phi, make_morphism(F, G, phi0, phi2)};
}

}  // namespace natmod::poly
