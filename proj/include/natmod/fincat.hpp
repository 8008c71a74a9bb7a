#pragma once

#include "natmod/key.hpp"
#include "natmod/report.hpp"

#include <map>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

namespace natmod {

// Bounded generator for a category whose hom sets are finite. objects(n) lists
// the objects of size at most n; hom(x, y) is always the full hom set.
class Category {
public:
    virtual ~Category() = default;
    virtual std::vector<Key> objects(int bound) const = 0;
    virtual std::vector<Key> hom(const Key& src, const Key& dst) const = 0;
    virtual Key compose(const Key& g, const Key& f) const = 0;  // g . f
    virtual Key identity(const Key& x) const = 0;
    virtual Key dom(const Key& f) const = 0;
    virtual Key cod(const Key& f) const = 0;
    virtual std::optional<Key> terminal() const { return std::nullopt; }
};

using CatPtr = std::shared_ptr<const Category>;

// Morphism keys of generated categories carry their ends: (dom,cod,payload).
Key mor_key(const Key& dom, const Key& cod, const Key& payload);
std::vector<Key> mor_parts(const Key& f);

// Materialized finite presentation.
class FinCat : public Category {
public:
    std::vector<Key> objs;
    std::map<std::pair<Key, Key>, std::vector<Key>> homs;
    std::map<std::pair<Key, Key>, Key> comp;  // (g, f) -> g . f
    std::map<Key, Key> ids;
    std::optional<Key> term;

    // Rebuilds the endpoint index from homs. Call after editing homs.
    void reindex();

    std::vector<Key> objects(int bound) const override;
    std::vector<Key> hom(const Key& src, const Key& dst) const override;
    Key compose(const Key& g, const Key& f) const override;
    Key identity(const Key& x) const override;
    Key dom(const Key& f) const override;
    Key cod(const Key& f) const override;
    std::optional<Key> terminal() const override { return term; }

    std::vector<Key> morphisms() const;
    bool has_object(const Key& x) const;

private:
    std::map<Key, std::pair<Key, Key>> ends_;
};

FinCat materialize(const Category& c, int bound);

// Empty report iff unit laws, associativity, hom disjointness and the
// terminal object all check out.
Report check_category(const FinCat& c);

struct FinFunctor {
    std::shared_ptr<const FinCat> source, target;
    std::map<Key, Key> obj, mor;
    bool preserves_terminal = false;
};

Report check_functor(const FinFunctor& F);

struct Cone {
    Key apex, left, right;  // left: apex -> dom f, right: apex -> dom g
};

// Universal cones by enumerating every competing cone. The first candidate in
// object/hom order that is universal wins.
std::optional<Cone> pullback(const FinCat& c, const Key& f, const Key& g);
std::optional<Cone> product(const FinCat& c, const Key& x, const Key& y);
bool is_pullback_cone(const FinCat& c, const Key& f, const Key& g, const Cone& cone);

// (Fin/I)^op: objects are words over I = {0..n-1}; a morphism (B,v) -> (A,u) is
// a function f : |u| -> |v| with v[f(k)] = u[k]. Size of an object is its length.
class FinSliceOp : public Category {
public:
    explicit FinSliceOp(int index_size) : n_(index_size) {}

    int index_size() const { return n_; }
    std::vector<Key> objects(int bound) const override;
    std::vector<Key> hom(const Key& src, const Key& dst) const override;
    Key compose(const Key& g, const Key& f) const override;
    Key identity(const Key& x) const override;
    Key dom(const Key& f) const override;
    Key cod(const Key& f) const override;
    std::optional<Key> terminal() const override { return Key("[]"); }

    static Key morphism(const std::vector<int>& dom, const std::vector<int>& cod,
                        const std::vector<int>& fn);
    static std::vector<int> function(const Key& f);

private:
    int n_;
};

// Poset on objects "0".."n-1" with le[i][j] meaning i <= j, one arrow i -> j when i <= j.
std::shared_ptr<FinCat> poset_category(const std::vector<std::vector<bool>>& le);

}  // namespace natmod
