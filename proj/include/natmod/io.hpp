#pragma once

#include "natmod/fincat.hpp"
#include "natmod/natmodel.hpp"
#include "natmod/polyset.hpp"

#include <json.hpp>

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace natmod {

using json = nlohmann::json;

// A finite natural model read from tables. Missing entries raise Undefined when used,
// so a partial table fails the checks instead of the parser.
class TableModel : public NaturalModel {
public:
    FinCat cat;
    std::string label = "table";
    std::map<Key, std::vector<Key>> types, terms;
    std::map<std::pair<Key, Key>, Key> typeof_;          // (ctx, term) -> type
    std::map<std::pair<Key, Key>, Key> sty, stm;         // (mor, type/term) -> result
    std::map<std::pair<Key, Key>, ExtData> exts;         // (ctx, type)
    std::optional<UnitStructure> unit;
    // declared sums: (ctx, A, B) -> Sigma, (ctx, A, B, a, b) -> pair
    std::map<std::tuple<Key, Key, Key>, Key> sigma_types;
    std::map<std::tuple<Key, Key, Key, Key, Key>, Key> sigma_pairs;

    std::vector<Key> objects(int bound) const override { return cat.objects(bound); }
    std::vector<Key> hom(const Key& src, const Key& dst) const override { return cat.hom(src, dst); }
    Key compose(const Key& g, const Key& f) const override { return cat.compose(g, f); }
    Key identity(const Key& x) const override { return cat.identity(x); }
    Key dom(const Key& f) const override { return cat.dom(f); }
    Key cod(const Key& f) const override { return cat.cod(f); }

    Key empty() const override;
    std::vector<Key> ty(const Key& ctx) const override;
    std::vector<Key> tm(const Key& ctx) const override;
    Key type_of(const Key& ctx, const Key& a) const override;
    Key subst_ty(const Key& s, const Key& A) const override;
    Key subst_tm(const Key& s, const Key& a) const override;
    ExtData ext(const Key& ctx, const Key& A) const override;
    bool is_type(const Key& ctx, const Key& A) const override;
    bool is_term(const Key& ctx, const Key& a) const override;

    int bound() const override { return static_cast<int>(cat.objs.size()); }
    std::string name() const override { return label; }

    bool has_sigma() const { return !sigma_types.empty(); }
    SigmaStructure sigma() const;
};

// Both throw MalformedInput on unknown fields, wrong shapes or dangling references.
std::shared_ptr<const TableModel> parse_model(const json& doc);
std::shared_ptr<const TableModel> parse_model_text(const std::string& text);

struct Declared {
    std::optional<UnitStructure> unit;
    std::optional<SigmaStructure> sigma;
};

// Tables of m on objects(bound). ext entries whose extension leaves the fragment are
// dropped, as are undefined substitutions. A TableModel carries its own declarations.
json model_to_json(const NaturalModel& m, int bound, const Declared& extra = {});

poly::Polynomial parse_polynomial(const json& doc);
json polynomial_to_json(const poly::Polynomial& p);

// {A, B, C, D, f, g, u, v}
poly::Square parse_square(const json& doc);

// u : C -> B and f : B -> A for the distributivity law
struct DistInstance {
    int A = 1, B = 0, C = 0;
    poly::Map f, u;
};
DistInstance parse_dist(const json& doc);

// {p, eta: {phi0, phi2}, mu: {phi0, phi2}} with eta : i => p and mu : p.p => p
poly::MonadData parse_monad(const json& doc);
json cell_to_json(const poly::PolyMorphism& c);

// Sorted keys, two-space indent, trailing newline.
std::string canonical(const json& doc);
json read_json_file(const std::string& path);  // throws MalformedInput

}  // namespace natmod
