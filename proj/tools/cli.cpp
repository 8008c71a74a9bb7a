#include "cli.hpp"

#include "natmod/io.hpp"
#include "natmod/models.hpp"
#include "natmod/suites.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <optional>

namespace natmod {

namespace {

struct Config {
    int bound = 3;
    unsigned seed = 1;
    std::string format = "text";
    std::string out;
    bool timing = false;
};

void write_file(const std::string& path, const std::string& body) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw MalformedInput("cannot write " + path);
    f << body;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Finite natural models and polynomials: constructions and bounded verification"};
    app.name("natmod");
    app.fallthrough();
    app.require_subcommand(1);

    Config cfg;
    app.add_option("--bound", cfg.bound, "Size bound for fragments")
        ->envname("NATMOD_BOUND")
        ->check(CLI::Range(1, 64))
        ->capture_default_str();
    app.add_option("--seed", cfg.seed, "Seed for sampled checks")->capture_default_str();
    app.add_option("--format", cfg.format, "Report format")
        ->check(CLI::IsMember({"text", "machine"}))
        ->capture_default_str();
    app.add_option("--out", cfg.out, "Write the produced model or polynomial here (the report for pure checks)");
    app.add_flag("--timing", cfg.timing, "Include timings in the report");

    std::string model_file;
    auto* check = app.add_subcommand("check", "Verify a model description file");
    check->add_option("model", model_file, "Model JSON")->required();

    std::string kind;
    FreeArgs fargs;
    auto* free = app.add_subcommand("free", "Run a free construction and its universal property");
    free->add_option("kind", kind, "Construction")
        ->required()
        ->check(CLI::IsMember({"term-model", "term", "type", "unit", "sigma", "poly-compose"}));
    free->add_option("--basic", fargs.basic, "Number of basic types of the base term model")
        ->check(CLI::Range(0, 4))
        ->capture_default_str();
    free->add_option("--type", fargs.type, "Type of the adjoined term")->capture_default_str();
    free->add_option("--leaves", fargs.leaves, "Largest tree for sums")->check(CLI::Range(1, 4))->capture_default_str();
    free->add_option("--with", fargs.with, "Second factor of the composite")
        ->check(CLI::IsMember({"self", "identity"}))
        ->capture_default_str();

    auto* poly = app.add_subcommand("poly", "Polynomials in finite sets");
    poly->require_subcommand(1);
    int samples = 50;
    std::string f1, f2;
    std::vector<int> family;
    bool trivial = false;
    auto* extend = poly->add_subcommand("extend", "Extension of a polynomial at a family");
    extend->add_option("polynomial", f1, "Polynomial JSON")->required();
    extend->add_option("--family", family, "Sizes X_i, comma separated")->delimiter(',')->required();
    auto* compose = poly->add_subcommand("compose", "Composite G . F with its witnesses");
    compose->add_option("G", f1, "Outer polynomial JSON")->required();
    compose->add_option("F", f2, "Inner polynomial JSON")->required();
    auto* bc = poly->add_subcommand("verify-bc", "Beck-Chevalley witnesses");
    bc->add_option("square", f1, "Square JSON; random squares when omitted");
    auto* dist = poly->add_subcommand("verify-dist", "Distributivity witnesses");
    dist->add_option("instance", f1, "Instance JSON; random maps when omitted");
    auto* monad = poly->add_subcommand("pseudomonad", "Check (p, eta, mu) and its adjustments");
    monad->add_option("data", f1, "Pseudomonad JSON; the classifier of the propositions model when omitted");
    monad->add_flag("--trivial", trivial, "Use the trivial polynomial instead");
    for (auto* s : {compose, bc, dist})
        s->add_option("--samples", samples, "Random instances")->check(CLI::Range(1, 100000))->capture_default_str();

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        VerificationReport rep;
        std::optional<std::string> artifact;
        if (*check) {
            auto m = parse_model(read_json_file(model_file));
            rep = check_model_suite(m, cfg.bound);
            artifact = canonical(model_to_json(*m, cfg.bound));
        } else if (*free) {
            auto res = free_suite(kind, fargs, cfg.bound);
            rep = std::move(res.report);
            artifact = canonical(model_to_json(*res.model, cfg.bound, res.declared));
        } else if (*extend) {
            auto F = parse_polynomial(read_json_file(f1));
            rep = poly_extend_suite(F, family, cfg.seed);
            artifact = canonical(json{{"family", family}, {"extension", poly::extend(F, family).family()}});
        } else if (*compose) {
            auto G = parse_polynomial(read_json_file(f1));
            auto F = parse_polynomial(read_json_file(f2));
            rep = poly_compose_suite(G, F, cfg.seed, samples);
            artifact = canonical(polynomial_to_json(poly::compose(G, F).poly));
        } else if (*bc) {
            std::optional<poly::Square> sq;
            if (!f1.empty()) sq = parse_square(read_json_file(f1));
            rep = poly_bc_suite(sq, cfg.seed, sq ? std::min(samples, 20) : samples);
        } else if (*dist) {
            std::optional<DistInstance> d;
            if (!f1.empty()) d = parse_dist(read_json_file(f1));
            rep = poly_dist_suite(d, cfg.seed, d ? std::min(samples, 20) : samples);
        } else if (*monad) {
            if (!f1.empty())
                rep = poly_pseudomonad_suite(parse_monad(read_json_file(f1)), f1);
            else if (trivial)
                rep = poly_pseudomonad_suite(poly::trivial_monad(), "trivial polynomial");
            else
                rep = poly_pseudomonad_suite(poly::classifier_monad(*fam_prop(cfg.bound)), "classifier of fam_prop");
        }
        if (rep.construction.empty()) return 2;
        rep.bound = (*poly) ? 0 : cfg.bound;
        rep.seed = cfg.seed;
        std::string body = cfg.format == "machine" ? rep.machine(cfg.timing) : rep.text(cfg.timing);
        out << body;
        if (!cfg.out.empty()) write_file(cfg.out, artifact ? *artifact : body);
        return rep.ok() ? 0 : 1;
    } catch (const MalformedInput& ex) {
        err << "error: " << ex.what() << '\n';
        return 2;
    } catch (const Undefined& ex) {
        err << "error: " << ex.what() << '\n';
        return 2;
    }
}

}  // namespace natmod
