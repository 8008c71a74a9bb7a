#include "natmod/suites.hpp"

#include "natmod/freemodel.hpp"
#include "natmod/models.hpp"

#include <chrono>
#include <iomanip>
#include <random>
#include <sstream>

namespace natmod {

bool VerificationReport::ok() const {
    for (const auto& c : checks)
        if (!c.report.ok()) return false;
    return true;
}

void VerificationReport::run(const std::string& name, bool bounded, const std::function<Report()>& fn) {
    auto t0 = std::chrono::steady_clock::now();
    Report r;
    try {
        r = fn();
    } catch (const MalformedInput&) {
        throw;
    } catch (const std::exception& ex) {
        r = Report(name, bound);
        r.fail("exception", ex.what());
    }
    r.bound = bound;
    std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
    checks.push_back({name, std::move(r), bounded, dt.count()});
}

std::string VerificationReport::text(bool timing) const {
    std::ostringstream os;
    os << "construction: " << construction << '\n' << "bound: ";
    if (bound > 0)
        os << bound;
    else
        os << "n/a";
    os << '\n' << "seed: " << seed << '\n';
    for (const auto& c : checks) {
        const Report& r = c.report;
        os << (r.ok() ? "[pass] " : "[FAIL] ") << c.name;
        if (c.bounded) os << " (" << r.caveat() << ")";
        if (r.total) os << ", " << r.total << " violation(s)";
        if (timing) os << std::fixed << std::setprecision(3) << " [" << c.seconds << " s]";
        os << '\n';
        for (const auto& v : r.violations) os << "  [" << v.law << "] " << v.detail << '\n';
        if (r.total > r.violations.size()) os << "  ... " << r.total - r.violations.size() << " more\n";
        for (const auto& n : r.notes) os << "  note: " << n << '\n';
    }
    os << "result: " << (ok() ? "pass" : "FAIL") << '\n';
    return os.str();
}

std::string VerificationReport::machine(bool timing) const {
    std::ostringstream os;
    json head{{"construction", construction}, {"bound", nullptr}, {"seed", seed}};
    if (bound > 0) head["bound"] = bound;
    os << head.dump() << '\n';
    for (const auto& c : checks) {
        json v = json::array();
        for (const auto& x : c.report.violations) v.push_back({{"law", x.law}, {"detail", x.detail}});
        json rec{{"check", c.name},
                 {"status", c.report.ok() ? "pass" : "fail"},
                 {"violations", c.report.total},
                 {"counterexamples", v},
                 {"notes", c.report.notes},
                 {"bounded", c.bounded}};
        if (timing) rec["seconds"] = c.seconds;
        os << rec.dump() << '\n';
    }
    os << json{{"result", ok() ? "pass" : "fail"}}.dump() << '\n';
    return os.str();
}

VerificationReport check_model_suite(std::shared_ptr<const TableModel> m, int bound) {
    VerificationReport out;
    out.construction = m->name();
    out.bound = bound;
    out.run("category laws", false, [&] { return check_category(m->cat); });
    if (!out.checks.back().report.ok()) {
        out.checks.back().report.notes.push_back("model checks skipped until the category laws hold");
        return out;
    }
    out.run("EAT equations", false, [&] { return check_eat(*m, bound); });
    out.run("representability", false, [&] { return model_representability(m, bound).report; });
    if (m->unit) out.run("unit structure", false, [&] { return check_unit(m, *m->unit, bound); });
    if (m->has_sigma()) out.run("sigma structure", false, [&] { return check_sigma(m, m->sigma(), bound); });
    return out;
}

namespace {

Pins pin(Pins p, const Key& ctx, char sort, const Key& k, const Key& v) {
    p.fixed[{ctx, sort, k}] = v;
    return p;
}

Report agreement(const std::string& what, const NMorphism& a, const NMorphism& b, int bound) {
    Report r(what, bound);
    if (tabulate(a, bound) != tabulate(b, bound)) r.fail("equation", what);
    return r;
}

Report uniqueness(const NMorphism& F, const Pins& pins, int bound) {
    auto u = verify_unique(F, bound, pins);
    u.report.notes.push_back("strict morphisms meeting the constraints: " + std::to_string(u.count));
    return u.report;
}

}  // namespace

FreeResult free_suite(const std::string& kind, const FreeArgs& args, int bound) {
    if (args.basic < 0) throw MalformedInput("--basic must be non-negative");
    const int b = bound;
    auto m = term_model(args.basic, b);
    auto D = fam_prop(b);
    std::vector<Key> images(args.basic, "[1]");
    auto F = initial_morphism(m, D, images);

    FreeResult res;
    VerificationReport& rep = res.report;
    rep.bound = b;
    auto model_checks = [&](ModelPtr c) {
        rep.construction = c->name();
        rep.run("EAT equations", true, [&] { return check_eat(*c, b); });
        rep.run("representability", true, [&] { return model_representability(c, b).report; });
    };
    auto strict = [&](const NMorphism& G) { return check_morphism(G, true, b).report; };

    if (kind == "term-model") {
        // alternate the two propositions so that the images differ
        for (int i = 0; i < args.basic; ++i) images[i] = i % 2 ? "[0]" : "[1]";
        Pins pins;
        for (int i = 0; i < args.basic; ++i) pins = pin(pins, m->empty(), 'T', std::to_string(i), images[i]);
        auto G = initial_morphism(m, D, images);
        model_checks(m);
        rep.run("initial morphism is strict", true, [&] { return strict(G); });
        rep.run("initial morphism is unique", true, [&] { return uniqueness(G, pins, b); });
        res.model = m;
    } else if (kind == "term") {
        if (args.type.empty() || !m->is_type(m->empty(), args.type))
            throw MalformedInput("--type must name a basic type of the base");
        auto e = extend_by_term(m, args.type);
        model_checks(e);
        auto I = inclusion(e);
        rep.run("inclusion is strict", true, [&] { return strict(I); });
        const Key o = "[1]";
        auto Fs = term_sharp(e, F, o);
        rep.run("F# is strict", true, [&] { return strict(Fs); });
        rep.run("F# . I = F", true, [&] { return agreement("F# . I = F", compose_morphisms(Fs, I), F, b); });
        rep.run("F#(x) = o", true, [&] {
            Report r("F#(x) = o", b);
            if (Fs.tm(e->empty(), e->x()) != o) r.fail("equation", "F#(x) = " + Fs.tm(e->empty(), e->x()));
            return r;
        });
        rep.run("F# is unique", true,
                [&] { return uniqueness(Fs, pin(pins_along(I, F, b), e->empty(), 't', e->x(), o), b); });
        res.model = e;
    } else if (kind == "type") {
        auto e = extend_by_type(m);
        model_checks(e);
        auto I = formal_inclusion(e);
        rep.run("inclusion is strict", true, [&] { return strict(I); });
        const Key O = "[0]";
        auto Fs = type_sharp(e, F, O);
        rep.run("F# is strict", true, [&] { return strict(Fs); });
        rep.run("F# . I = F", true, [&] { return agreement("F# . I = F", compose_morphisms(Fs, I), F, b); });
        rep.run("F#(X) = O", true, [&] {
            Report r("F#(X) = O", b);
            if (Fs.ty(e->empty(), "X") != O) r.fail("equation", "F#(X) = " + Fs.ty(e->empty(), "X"));
            return r;
        });
        rep.run("F# is unique", true,
                [&] { return uniqueness(Fs, pin(pins_along(I, F, b), e->empty(), 'T', "X", O), b); });
        res.model = e;
    } else if (kind == "unit") {
        auto e = extend_by_unit(m);
        model_checks(e);
        rep.run("unit structure", true, [&] { return check_unit(e, e->unit(), b); });
        auto I = formal_inclusion(e);
        rep.run("inclusion is strict", true, [&] { return strict(I); });
        auto u = D->unit();
        auto Fs = unit_sharp(e, F, u);
        rep.run("F# is strict", true, [&] { return strict(Fs); });
        rep.run("F# . I = F", true, [&] { return agreement("F# . I = F", compose_morphisms(Fs, I), F, b); });
        rep.run("F# preserves the unit", false, [&] { return check_unit_morphism(Fs, e->unit(), u); });
        rep.run("F# is unique", true, [&] {
            auto pins = pin(pins_along(I, F, b), e->empty(), 'T', e->unit().unit, u.unit);
            return uniqueness(Fs, pin(pins, e->empty(), 't', e->unit().star, u.star), b);
        });
        res.model = e;
        res.declared.unit = e->unit();
    } else if (kind == "sigma") {
        if (args.leaves < 1) throw MalformedInput("--leaves must be positive");
        auto e = extend_by_sigma(m, args.leaves);
        model_checks(e);
        rep.run("sigma structure", true, [&] { return check_sigma(e, e->sigma(), b); });
        auto I = sigma_inclusion(e);
        rep.run("inclusion is strict", true, [&] { return strict(I); });
        auto Fs = sigma_sharp(e, F, D->sigma());
        rep.run("F# is strict", true, [&] { return strict(Fs); });
        rep.run("F# . I = F", true, [&] { return agreement("F# . I = F", compose_morphisms(Fs, I), F, b); });
        rep.run("F# preserves sums", true, [&] { return check_sigma_morphism(Fs, e->sigma(), D->sigma(), b); });
        rep.run("F# is unique", true, [&] {
            Pins pins = pins_along(I, F, b);
            pins.accept = preserves_sigma(e, e->sigma(), D, D->sigma());
            return uniqueness(Fs, pins, b);
        });
        res.model = e;
        res.declared.sigma = e->sigma();
    } else if (kind == "poly-compose") {
        ModelPtr q;
        if (args.with == "self")
            q = m;
        else if (args.with == "identity")
            q = std::make_shared<IdentityClassifier>(m);
        else
            throw MalformedInput("--with must be self or identity");
        auto c = poly_composite_models(m, q);
        model_checks(c);
        if (args.with == "identity")
            rep.run("identity classifier is a unit", true, [&] {
                Report r("unit", b);
                for (const auto& G : m->objects(b))
                    for (const auto& A : m->ty(G))
                        if (c->ext(G, tup({"*", A})).extended != m->ext(G, A).extended)
                            r.fail("unit", G + " extended by " + A);
                return r;
            });
        res.model = c;
    } else {
        throw MalformedInput("unknown construction '" + kind + "'");
    }
    return res;
}

namespace {

using namespace poly;

Report size_oracle(const Polynomial& F, const Family& X) {
    Report r("extension sizes", 0);
    auto sizes = extend(F, X).family();
    for (int j = 0; j < F.J; ++j) {
        long n = 0;
        for (int a = 0; a < F.A; ++a) {
            if (F.t[a] != j) continue;
            long prod = 1;
            for (int bb = 0; bb < F.B; ++bb)
                if (F.f[bb] == a) prod *= X[F.s[bb]];
            n += prod;
        }
        if (n != sizes[j]) r.fail("size", "j = " + std::to_string(j));
    }
    r.notes.push_back("P_F(X) = " + int_list(sizes));
    return r;
}

}  // namespace

VerificationReport poly_extend_suite(const Polynomial& F, const Family& X, unsigned seed) {
    if (static_cast<int>(X.size()) != F.I) throw MalformedInput("family must have one size per element of I");
    for (int x : X)
        if (x < 0) throw MalformedInput("family sizes must be non-negative");
    VerificationReport out;
    out.construction = "extension of " + F.key();
    out.bound = 0;
    out.seed = seed;
    std::mt19937 rng(seed);
    out.run("extension sizes", false, [&] { return size_oracle(F, X); });
    out.run("functoriality", false, [&] {
        Report r("functoriality", 0);
        auto Y = random_target(rng, X, 3), Z = random_target(rng, Y, 3);
        auto h = random_family_map(rng, X, Y), k = random_family_map(rng, Y, Z);
        FamilyMap kh, idX;
        for (std::size_t i = 0; i < X.size(); ++i) {
            kh.push_back(compose_maps(k[i], h[i]));
            idX.push_back(identity_map(X[i]));
        }
        auto PX = extend(F, X).family();
        auto lhs = extend_map(F, X, Z, kh);
        auto ph = extend_map(F, X, Y, h), pk = extend_map(F, Y, Z, k);
        auto id = extend_map(F, X, X, idX);
        for (int j = 0; j < F.J; ++j) {
            if (lhs[j] != compose_maps(pk[j], ph[j])) r.fail("composition", "j = " + std::to_string(j));
            if (id[j] != identity_map(PX[j])) r.fail("identity", "j = " + std::to_string(j));
        }
        return r;
    });
    return out;
}

VerificationReport poly_compose_suite(const Polynomial& G, const Polynomial& F, unsigned seed, int samples) {
    if (G.I != F.J) throw MalformedInput("G must start where F ends");
    VerificationReport out;
    out.construction = G.key() + " . " + F.key();
    out.bound = 0;
    out.seed = seed;
    std::mt19937 rng(seed);
    out.run("composite extension", false, [&] {
        Report r("composition", 0);
        for (int i = 0; i < samples; ++i) {
            auto X = random_family(rng, F.I, 2);
            auto Y = random_target(rng, X, 2);
            r.merge(check_composition(G, F, X, Y, random_family_map(rng, X, Y)));
        }
        r.notes.push_back(std::to_string(samples) + " random families");
        return r;
    });
    auto unit_check = [&](const std::string& name, const PolyMorphism& cell) {
        out.run(name, false, [&] {
            Report r = cell.check(name);
            if (!cell.cartesian()) r.fail("cartesian", name);
            if (!invert(cell.phi0, cell.cod.A)) r.fail("isomorphism", "phi0 is not a bijection");
            if (r.ok()) r.notes.push_back("isomorphism witness found");
            return r;
        });
    };
    if (G == identity_poly(G.I)) unit_check("left unit F => i . F", left_unitor(F));
    if (F == identity_poly(F.I)) unit_check("right unit G => G . i", right_unitor(G));
    return out;
}

VerificationReport poly_bc_suite(const std::optional<Square>& sq, unsigned seed, int samples) {
    VerificationReport out;
    out.construction = sq ? "Beck-Chevalley on the given square" : "Beck-Chevalley on random squares";
    out.bound = 0;
    out.seed = seed;
    std::mt19937 rng(seed);
    out.run("Beck-Chevalley", false, [&] {
        Report r("Beck-Chevalley", 0);
        for (int i = 0; i < samples; ++i) {
            Square s = sq ? *sq : random_pullback_square(rng, 3);
            auto X = random_family(rng, s.A, 2);
            auto Y = random_target(rng, X, 3);
            r.merge(check_beck_chevalley(s, X, Y, random_family_map(rng, X, Y)));
        }
        r.notes.push_back(std::to_string(samples) + " instances");
        return r;
    });
    return out;
}

VerificationReport poly_dist_suite(const std::optional<DistInstance>& d, unsigned seed, int samples) {
    VerificationReport out;
    out.construction = d ? "distributivity on the given maps" : "distributivity on random maps";
    out.bound = 0;
    out.seed = seed;
    std::mt19937 rng(seed);
    out.run("distributivity", false, [&] {
        Report r("distributivity", 0);
        for (int i = 0; i < samples; ++i) {
            DistInstance x;
            if (d) {
                x = *d;
            } else {
                x.A = 1 + static_cast<int>(rng() % 3);
                x.B = 1 + static_cast<int>(rng() % 3);
                x.C = 1 + static_cast<int>(rng() % 3);
                x.f.resize(x.B);
                x.u.resize(x.C);
                for (auto& v : x.f) v = static_cast<int>(rng() % x.A);
                for (auto& v : x.u) v = static_cast<int>(rng() % x.B);
            }
            auto X = random_family(rng, x.C, 2);
            auto Y = random_target(rng, X, 3);
            r.merge(check_distributivity(x.u, x.C, x.f, x.B, x.A, X, Y, random_family_map(rng, X, Y)));
        }
        r.notes.push_back(std::to_string(samples) + " instances");
        return r;
    });
    return out;
}

VerificationReport poly_pseudomonad_suite(const MonadData& d, const std::string& label) {
    VerificationReport out;
    out.construction = label;
    out.bound = 0;
    out.run("pseudomonad data", false, [&] {
        auto pr = check_pseudomonad_data(d.p, d.eta, d.mu);
        auto note = [&](const char* name, const std::optional<Adjustment>& a) {
            if (a) pr.report.notes.push_back(std::string(name) + " = " + int_list(a->alpha));
        };
        note("alpha", pr.alpha);
        note("lambda", pr.lambda);
        note("rho", pr.rho);
        return pr.report;
    });
    return out;
}

}  // namespace natmod
