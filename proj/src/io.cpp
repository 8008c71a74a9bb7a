#include "natmod/io.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace natmod {

namespace {

template <class M, class K>
const typename M::mapped_type& lookup(const M& m, const K& k, const std::string& what) {
    auto it = m.find(k);
    if (it == m.end()) throw Undefined(what);
    return it->second;
}

[[noreturn]] void bad(const std::string& msg) { throw MalformedInput(msg); }

const json& field(const json& doc, const char* name) {
    auto it = doc.find(name);
    if (it == doc.end()) bad(std::string("missing section '") + name + "'");
    return *it;
}

Key str(const json& v, const std::string& where) {
    if (!v.is_string()) bad(where + ": expected a string");
    return v.get<std::string>();
}

std::vector<Key> strs(const json& v, const std::string& where) {
    if (!v.is_array()) bad(where + ": expected an array of strings");
    std::vector<Key> out;
    for (const auto& x : v) out.push_back(str(x, where));
    return out;
}

std::vector<Key> row(const json& v, std::size_t n, const std::string& where) {
    auto out = strs(v, where);
    if (out.size() != n) bad(where + ": expected " + std::to_string(n) + " entries");
    return out;
}

void only(const json& doc, std::initializer_list<const char*> allowed, const std::string& where) {
    if (!doc.is_object()) bad(where + ": expected an object");
    for (auto it = doc.begin(); it != doc.end(); ++it)
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return it.key() == a; }))
            bad(where + ": unknown field '" + it.key() + "'");
}

bool contains(const std::vector<Key>& v, const Key& x) { return std::find(v.begin(), v.end(), x) != v.end(); }

}  // namespace

Key TableModel::empty() const {
    if (!cat.term) throw Undefined("no terminal object");
    return *cat.term;
}

std::vector<Key> TableModel::ty(const Key& ctx) const {
    auto it = types.find(ctx);
    return it == types.end() ? std::vector<Key>{} : it->second;
}

std::vector<Key> TableModel::tm(const Key& ctx) const {
    auto it = terms.find(ctx);
    return it == terms.end() ? std::vector<Key>{} : it->second;
}

Key TableModel::type_of(const Key& ctx, const Key& a) const {
    return lookup(typeof_, std::pair{ctx, a}, "typeof " + a + " in " + ctx);
}

Key TableModel::subst_ty(const Key& s, const Key& A) const {
    return lookup(sty, std::pair{s, A}, "subst_ty " + A + " along " + s);
}

Key TableModel::subst_tm(const Key& s, const Key& a) const {
    return lookup(stm, std::pair{s, a}, "subst_tm " + a + " along " + s);
}

ExtData TableModel::ext(const Key& ctx, const Key& A) const {
    return lookup(exts, std::pair{ctx, A}, "ext " + ctx + " by " + A);
}

bool TableModel::is_type(const Key& ctx, const Key& A) const { return contains(ty(ctx), A); }
bool TableModel::is_term(const Key& ctx, const Key& a) const { return contains(tm(ctx), a); }

SigmaStructure TableModel::sigma() const {
    SigmaStructure s;
    s.sigma = [this](const Key& G, const Key& A, const Key& B) {
        return lookup(sigma_types, std::tuple{G, A, B}, "Sigma(" + A + "," + B + ") in " + G);
    };
    s.pair = [this](const Key& G, const Key& A, const Key& B, const Key& a, const Key& b) {
        return lookup(sigma_pairs, std::tuple{G, A, B, a, b}, "pair(" + a + "," + b + ") in " + G);
    };
    return s;
}

std::shared_ptr<const TableModel> parse_model(const json& doc) {
    only(doc,
         {"name", "objects", "homs", "compose", "identities", "terminal", "ty", "tm", "typeof", "subst_ty",
          "subst_tm", "ext", "unit", "sigma"},
         "model");
    auto m = std::make_shared<TableModel>();
    if (doc.contains("name")) m->label = str(doc["name"], "name");

    FinCat& c = m->cat;
    c.objs = strs(field(doc, "objects"), "objects");
    std::set<Key> objs(c.objs.begin(), c.objs.end());
    if (objs.size() != c.objs.size()) bad("objects: duplicate entry");
    auto object = [&](const Key& x, const std::string& where) {
        if (!objs.count(x)) bad(where + ": unknown object '" + x + "'");
    };

    const json& homs = field(doc, "homs");
    if (!homs.is_array()) bad("homs: expected an array of [dom, cod, [morphisms]]");
    std::set<Key> mors;
    for (const auto& h : homs) {
        if (!h.is_array() || h.size() != 3) bad("homs: expected [dom, cod, [morphisms]]");
        Key x = str(h[0], "homs"), y = str(h[1], "homs");
        object(x, "homs");
        object(y, "homs");
        if (c.homs.count({x, y})) bad("homs: repeated pair (" + x + "," + y + ")");
        auto fs = strs(h[2], "homs");
        c.homs[{x, y}] = fs;
        mors.insert(fs.begin(), fs.end());
    }
    auto morphism = [&](const Key& f, const std::string& where) {
        if (!mors.count(f)) bad(where + ": unknown morphism '" + f + "'");
    };

    const json& comp = field(doc, "compose");
    if (!comp.is_array()) bad("compose: expected an array of [g, f, g.f]");
    for (const auto& e : comp) {
        auto r = row(e, 3, "compose");
        for (const auto& f : r) morphism(f, "compose");
        if (!c.comp.emplace(std::pair{r[0], r[1]}, r[2]).second) bad("compose: repeated pair (" + r[0] + "," + r[1] + ")");
    }

    const json& ids = field(doc, "identities");
    if (!ids.is_object()) bad("identities: expected an object");
    for (auto it = ids.begin(); it != ids.end(); ++it) {
        object(it.key(), "identities");
        Key f = str(it.value(), "identities");
        morphism(f, "identities");
        c.ids[it.key()] = f;
    }
    c.term = str(field(doc, "terminal"), "terminal");
    object(*c.term, "terminal");
    c.reindex();

    auto per_ctx = [&](const char* name, std::map<Key, std::vector<Key>>& into) {
        const json& t = field(doc, name);
        if (!t.is_object()) bad(std::string(name) + ": expected an object");
        for (auto it = t.begin(); it != t.end(); ++it) {
            object(it.key(), name);
            auto xs = strs(it.value(), name);
            if (std::set<Key>(xs.begin(), xs.end()).size() != xs.size()) bad(std::string(name) + ": duplicate entry");
            into[it.key()] = xs;
        }
    };
    per_ctx("ty", m->types);
    per_ctx("tm", m->terms);

    const json& tof = field(doc, "typeof");
    if (!tof.is_object()) bad("typeof: expected an object");
    for (auto it = tof.begin(); it != tof.end(); ++it) {
        object(it.key(), "typeof");
        if (!it.value().is_object()) bad("typeof: expected an object per context");
        for (auto jt = it.value().begin(); jt != it.value().end(); ++jt) {
            if (!m->is_term(it.key(), jt.key())) bad("typeof: '" + jt.key() + "' is not a term in " + it.key());
            Key A = str(jt.value(), "typeof");
            if (!m->is_type(it.key(), A)) bad("typeof: '" + A + "' is not a type in " + it.key());
            m->typeof_[{it.key(), jt.key()}] = A;
        }
    }
    for (const auto& [G, ts] : m->terms)
        for (const auto& a : ts)
            if (!m->typeof_.count({G, a})) bad("typeof: no type for term '" + a + "' in " + G);

    auto substs = [&](const char* name, std::map<std::pair<Key, Key>, Key>& into) {
        const json& t = field(doc, name);
        if (!t.is_array()) bad(std::string(name) + ": expected an array of [morphism, x, result]");
        for (const auto& e : t) {
            auto r = row(e, 3, name);
            morphism(r[0], name);
            if (!into.emplace(std::pair{r[0], r[1]}, r[2]).second) bad(std::string(name) + ": repeated entry");
        }
    };
    substs("subst_ty", m->sty);
    substs("subst_tm", m->stm);

    const json& ext = field(doc, "ext");
    if (!ext.is_array()) bad("ext: expected an array");
    for (const auto& e : ext) {
        only(e, {"ctx", "type", "extended", "proj", "var"}, "ext");
        Key G = str(field(e, "ctx"), "ext"), A = str(field(e, "type"), "ext");
        object(G, "ext");
        if (!m->is_type(G, A)) bad("ext: '" + A + "' is not a type in " + G);
        ExtData d{str(field(e, "extended"), "ext"), str(field(e, "proj"), "ext"), str(field(e, "var"), "ext")};
        object(d.extended, "ext");
        morphism(d.proj, "ext");
        if (!m->is_term(d.extended, d.var)) bad("ext: '" + d.var + "' is not a term in " + d.extended);
        if (!m->exts.emplace(std::pair{G, A}, d).second) bad("ext: repeated entry for (" + G + "," + A + ")");
    }

    if (doc.contains("unit")) {
        const json& u = doc["unit"];
        only(u, {"unit", "star"}, "unit");
        m->unit = UnitStructure{str(field(u, "unit"), "unit"), str(field(u, "star"), "unit")};
    }
    if (doc.contains("sigma")) {
        const json& s = doc["sigma"];
        only(s, {"types", "pairs"}, "sigma");
        for (const auto& e : field(s, "types")) {
            auto r = row(e, 4, "sigma.types");
            object(r[0], "sigma.types");
            m->sigma_types[{r[0], r[1], r[2]}] = r[3];
        }
        for (const auto& e : field(s, "pairs")) {
            auto r = row(e, 6, "sigma.pairs");
            object(r[0], "sigma.pairs");
            m->sigma_pairs[{r[0], r[1], r[2], r[3], r[4]}] = r[5];
        }
    }
    return m;
}

std::shared_ptr<const TableModel> parse_model_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& ex) {
        throw MalformedInput(std::string("invalid JSON: ") + ex.what());
    }
    return parse_model(doc);
}

json model_to_json(const NaturalModel& m, int bound, const Declared& extra) {
    json doc = json::object();
    auto objs = m.objects(bound);
    std::set<Key> inside(objs.begin(), objs.end());
    doc["name"] = m.name();
    doc["objects"] = objs;
    doc["terminal"] = m.empty();

    json homs = json::array(), ids = json::object();
    std::map<std::pair<Key, Key>, Key> comp;
    std::vector<std::pair<Key, std::pair<Key, Key>>> all;  // morphism, (dom, cod)
    for (const auto& x : objs) {
        ids[x] = m.identity(x);
        for (const auto& y : objs) {
            auto h = m.hom(x, y);
            if (h.empty()) continue;
            homs.push_back(json::array({x, y, h}));
            for (const auto& f : h) all.push_back({f, {x, y}});
        }
    }
    for (const auto& [f, fe] : all)
        for (const auto& [g, ge] : all)
            if (ge.first == fe.second) comp[{g, f}] = m.compose(g, f);
    json compose = json::array();
    for (const auto& [gf, r] : comp) compose.push_back(json::array({gf.first, gf.second, r}));
    doc["homs"] = homs;
    doc["identities"] = ids;
    doc["compose"] = compose;

    json ty = json::object(), tm = json::object(), tof = json::object(), ext = json::array();
    std::map<std::pair<Key, Key>, Key> sty, stm;
    for (const auto& G : objs) {
        auto ts = m.ty(G);
        auto as = m.tm(G);
        ty[G] = ts;
        tm[G] = as;
        json t = json::object();
        for (const auto& a : as) t[a] = m.type_of(G, a);
        tof[G] = t;
        for (const auto& A : ts) {
            try {
                auto e = m.ext(G, A);
                if (inside.count(e.extended))
                    ext.push_back({{"ctx", G}, {"type", A}, {"extended", e.extended}, {"proj", e.proj}, {"var", e.var}});
            } catch (const Undefined&) {
            }
        }
    }
    for (const auto& [s, se] : all) {
        for (const auto& A : m.ty(se.second)) try {
                sty[{s, A}] = m.subst_ty(s, A);
            } catch (const Undefined&) {
            }
        for (const auto& a : m.tm(se.second)) try {
                stm[{s, a}] = m.subst_tm(s, a);
            } catch (const Undefined&) {
            }
    }
    auto rows = [](const std::map<std::pair<Key, Key>, Key>& t) {
        json out = json::array();
        for (const auto& [k, v] : t) out.push_back(json::array({k.first, k.second, v}));
        return out;
    };
    doc["ty"] = ty;
    doc["tm"] = tm;
    doc["typeof"] = tof;
    doc["subst_ty"] = rows(sty);
    doc["subst_tm"] = rows(stm);
    doc["ext"] = ext;

    Declared d = extra;
    if (auto* t = dynamic_cast<const TableModel*>(&m)) {
        if (!d.unit && t->unit) d.unit = t->unit;
        if (!d.sigma && t->has_sigma()) {
            // copy the declared tables verbatim
            json types = json::array(), pairs = json::array();
            for (const auto& [k, v] : t->sigma_types)
                types.push_back(json::array({std::get<0>(k), std::get<1>(k), std::get<2>(k), v}));
            for (const auto& [k, v] : t->sigma_pairs)
                pairs.push_back(json::array(
                    {std::get<0>(k), std::get<1>(k), std::get<2>(k), std::get<3>(k), std::get<4>(k), v}));
            doc["sigma"] = {{"types", types}, {"pairs", pairs}};
        }
    }
    if (d.unit) doc["unit"] = {{"unit", d.unit->unit}, {"star", d.unit->star}};
    if (d.sigma) {
        std::map<std::tuple<Key, Key, Key>, Key> types;
        std::map<std::tuple<Key, Key, Key, Key, Key>, Key> pairs;
        for (const auto& G : objs)
            for (const auto& A : m.ty(G)) {
                ExtData e;
                try {
                    e = m.ext(G, A);
                } catch (const Undefined&) {
                    continue;
                }
                if (!inside.count(e.extended)) continue;
                for (const auto& B : m.ty(e.extended)) {
                    try {
                        types[{G, A, B}] = d.sigma->sigma(G, A, B);
                    } catch (const std::exception&) {
                        continue;
                    }
                    for (const auto& a : m.tm(G)) {
                        if (m.type_of(G, a) != A) continue;
                        Key Ba;
                        try {
                            Ba = m.subst_ty(section(m, G, A, a), B);
                        } catch (const std::exception&) {
                            continue;
                        }
                        for (const auto& b : m.tm(G))
                            if (m.type_of(G, b) == Ba) try {
                                    pairs[{G, A, B, a, b}] = d.sigma->pair(G, A, B, a, b);
                                } catch (const std::exception&) {
                                }
                    }
                }
            }
        json jt = json::array(), jp = json::array();
        for (const auto& [k, v] : types) jt.push_back(json::array({std::get<0>(k), std::get<1>(k), std::get<2>(k), v}));
        for (const auto& [k, v] : pairs)
            jp.push_back(
                json::array({std::get<0>(k), std::get<1>(k), std::get<2>(k), std::get<3>(k), std::get<4>(k), v}));
        doc["sigma"] = {{"types", jt}, {"pairs", jp}};
    }
    return doc;
}

namespace {

int size_field(const json& doc, const char* n) {
    const json& v = field(doc, n);
    if (!v.is_number_integer() || v.get<int>() < 0) bad(std::string(n) + ": expected a size");
    return v.get<int>();
}

poly::Map map_field(const json& doc, const char* n) {
    const json& v = field(doc, n);
    if (!v.is_array()) bad(std::string(n) + ": expected an array of integers");
    poly::Map out;
    for (const auto& x : v) {
        if (!x.is_number_integer()) bad(std::string(n) + ": expected an array of integers");
        out.push_back(x.get<int>());
    }
    return out;
}

}  // namespace

poly::Polynomial parse_polynomial(const json& doc) {
    only(doc, {"I", "B", "A", "J", "s", "f", "t"}, "polynomial");
    auto size = [&](const char* n) { return size_field(doc, n); };
    auto map = [&](const char* n) { return map_field(doc, n); };
    poly::Polynomial p;
    p.I = size("I");
    p.B = size("B");
    p.A = size("A");
    p.J = size("J");
    p.s = map("s");
    p.f = map("f");
    p.t = map("t");
    p.validate();
    return p;
}

json polynomial_to_json(const poly::Polynomial& p) {
    return {{"I", p.I}, {"B", p.B}, {"A", p.A}, {"J", p.J}, {"s", p.s}, {"f", p.f}, {"t", p.t}};
}

poly::Square parse_square(const json& doc) {
    only(doc, {"A", "B", "C", "D", "f", "g", "u", "v"}, "square");
    poly::Square sq{size_field(doc, "A"), size_field(doc, "B"), size_field(doc, "C"), size_field(doc, "D"),
                    map_field(doc, "f"),  map_field(doc, "g"),  map_field(doc, "u"),  map_field(doc, "v")};
    if (!sq.is_pullback()) bad("square: not a pullback square");
    return sq;
}

DistInstance parse_dist(const json& doc) {
    only(doc, {"A", "B", "C", "f", "u"}, "distributivity instance");
    DistInstance d{size_field(doc, "A"), size_field(doc, "B"), size_field(doc, "C"), map_field(doc, "f"),
                   map_field(doc, "u")};
    if (!poly::is_map(d.f, d.B, d.A)) bad("f: not a map B -> A");
    if (!poly::is_map(d.u, d.C, d.B)) bad("u: not a map C -> B");
    return d;
}

poly::MonadData parse_monad(const json& doc) {
    only(doc, {"p", "eta", "mu"}, "pseudomonad");
    auto p = parse_polynomial(field(doc, "p"));
    auto cell = [&](const char* n, const poly::Polynomial& src) {
        const json& c = field(doc, n);
        only(c, {"phi0", "phi2"}, n);
        return poly::make_morphism(src, p, map_field(c, "phi0"), map_field(c, "phi2"));
    };
    auto eta = cell("eta", poly::identity_poly(p.I));
    auto mu = cell("mu", poly::compose(p, p).poly);
    return {p, eta, mu};
}

json cell_to_json(const poly::PolyMorphism& c) { return {{"phi0", c.phi0}, {"phi2", c.phi2}}; }

std::string canonical(const json& doc) { return doc.dump(2) + "\n"; }

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MalformedInput("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return json::parse(ss.str());
    } catch (const json::parse_error& ex) {
        throw MalformedInput(path + ": invalid JSON: " + ex.what());
    }
}

}  // namespace natmod
