#pragma once

#include "natmod/io.hpp"
#include "natmod/polyset.hpp"
#include "natmod/report.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace natmod {

struct Check {
    std::string name;
    Report report;
    bool bounded = true;
    double seconds = 0;
};

struct VerificationReport {
    std::string construction;
    int bound = 3;
    unsigned seed = 1;
    std::vector<Check> checks;

    bool ok() const;
    // Runs fn, records its report under name and the elapsed time.
    void run(const std::string& name, bool bounded, const std::function<Report()>& fn);
    std::string text(bool timing = false) const;
    // One JSON record per line: a header, one per check, a result line.
    std::string machine(bool timing = false) const;
};

VerificationReport check_model_suite(std::shared_ptr<const TableModel> m, int bound);

struct FreeArgs {
    int basic = 1;            // basic types of the term model used as base
    Key type = "0";           // the type of the adjoined term
    int leaves = 2;           // tree size for sums
    std::string with = "self";  // poly-compose partner: self | identity
};

struct FreeResult {
    VerificationReport report;
    ModelPtr model;
    Declared declared;
};

// kind: term-model | term | type | unit | sigma | poly-compose. Throws MalformedInput on bad args.
FreeResult free_suite(const std::string& kind, const FreeArgs& args, int bound);

VerificationReport poly_extend_suite(const poly::Polynomial& F, const poly::Family& X, unsigned seed);
VerificationReport poly_compose_suite(const poly::Polynomial& G, const poly::Polynomial& F, unsigned seed,
                                      int samples);
VerificationReport poly_bc_suite(const std::optional<poly::Square>& sq, unsigned seed, int samples);
VerificationReport poly_dist_suite(const std::optional<DistInstance>& d, unsigned seed, int samples);
VerificationReport poly_pseudomonad_suite(const poly::MonadData& d, const std::string& label);

}  // namespace natmod
