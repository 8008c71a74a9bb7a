#include "natmod/freemodel.hpp"

#include <deque>
#include <functional>
#include <set>

namespace natmod {

MorphismTable tabulate(const NMorphism& F, int bound) {
    const auto& C = *F.src;
    MorphismTable t;
    auto objs = C.objects(bound);
    for (const auto& X : objs) {
        t.obj[X] = F.obj(X);
        for (const auto& A : C.ty(X)) t.ty[{X, A}] = F.ty(X, A);
        for (const auto& a : C.tm(X)) t.tm[{X, a}] = F.tm(X, a);
    }
    for (const auto& X : objs)
        for (const auto& Y : objs)
            for (const auto& s : C.hom(X, Y)) t.mor[s] = F.mor(s);
    return t;
}

Pins pins_along(const NMorphism& G, const NMorphism& F, int bound) {
    Pins p;
    for (const auto& X : G.src->objects(bound)) {
        const Key GX = G.obj(X);
        for (const auto& A : G.src->ty(X)) p.fixed[{GX, 'T', G.ty(X, A)}] = F.ty(X, A);
        for (const auto& a : G.src->tm(X)) p.fixed[{GX, 't', G.tm(X, a)}] = F.tm(X, a);
    }
    return p;
}

std::function<bool(const MorphismTable&)> preserves_sigma(ModelPtr C, const SigmaStructure& s, ModelPtr D,
                                                          const SigmaStructure& t) {
    return [C, s, D, t](const MorphismTable& F) {
        try {
            for (const auto& [X, FX] : F.obj) {
                auto terms = C->tm(X);
                for (const auto& A : C->ty(X)) {
                    auto e = C->ext(X, A);
                    if (!F.obj.count(e.extended)) continue;
                    const Key FA = F.ty.at({X, A});
                    for (const auto& B : C->ty(e.extended)) {
                        auto S = F.ty.find({X, s.sigma(X, A, B)});
                        if (S == F.ty.end()) continue;
                        const Key FB = F.ty.at({e.extended, B});
                        if (S->second != t.sigma(FX, FA, FB)) return false;
                        for (const auto& a : terms) {
                            if (C->type_of(X, a) != A) continue;
                            Key Ba = C->subst_ty(section(*C, X, A, a), B);
                            for (const auto& b : terms) {
                                if (C->type_of(X, b) != Ba) continue;
                                auto P = F.tm.find({X, s.pair(X, A, B, a, b)});
                                if (P == F.tm.end()) continue;
                                if (P->second != t.pair(FX, FA, FB, F.tm.at({X, a}), F.tm.at({X, b}))) return false;
                            }
                        }
                    }
                }
            }
        } catch (const std::exception&) {
            return false;
        }
        return true;
    };
}

namespace {

struct Edge {
    Key from, type;
    ExtData e;
};

enum class Got { Ok, Unknown, Bad };

// Backtracking search for strict morphisms. Objects are visited in the order they
// are reached by extension from the empty context; F on an object is forced by its
// parent edge, F on a morphism into Y.B by <F(p . s), F(q[s])>.
class Search {
public:
    Search(ModelPtr C, ModelPtr D, int bound, const Pins& pins, std::size_t cap)
        : C_(std::move(C)), D_(std::move(D)), c_(*C_), d_(*D_), pins_(pins), cap_(cap) {
        auto objs = c_.objects(bound);
        std::set<Key> frag(objs.begin(), objs.end());
        for (const auto& X : objs) {
            tys_[X] = c_.ty(X);
            tms_[X] = c_.tm(X);
        }
        const Key root = c_.empty();
        if (!frag.count(root)) throw Undefined("the empty context is not in the fragment");
        std::deque<Key> queue{root};
        std::set<Key> seen{root};
        while (!queue.empty()) {
            Key X = queue.front();
            queue.pop_front();
            order_.push_back(X);
            for (const auto& A : tys_[X]) {
                ExtData e;
                try {
                    e = c_.ext(X, A);
                } catch (const Undefined&) {
                    continue;
                }
                if (!frag.count(e.extended)) continue;
                into_[e.extended].push_back({X, A, e});
                if (seen.insert(e.extended).second) {
                    parent_[e.extended] = {X, A, e};
                    queue.push_back(e.extended);
                }
            }
        }
        for (const auto& X : objs)
            if (!seen.count(X)) throw Undefined(X + " is not reachable by extensions inside the fragment");
        for (std::size_t i = 0; i < order_.size(); ++i) pos_[order_[i]] = i;
    }

    std::vector<MorphismTable> run() {
        visit(0);
        return found_;
    }

private:
    ModelPtr C_, D_;
    const NaturalModel& c_;
    const NaturalModel& d_;
    const Pins& pins_;
    std::size_t cap_;

    std::vector<Key> order_;
    std::map<Key, std::size_t> pos_;
    std::map<Key, Edge> parent_;
    std::map<Key, std::vector<Edge>> into_;
    std::map<Key, std::vector<Key>> tys_, tms_;
    std::map<std::pair<Key, Key>, std::vector<Key>> homs_;

    std::map<Key, Key> fobj_;
    std::map<std::pair<Key, Key>, Key> fty_, ftm_;
    std::map<Key, Key> fmor_;
    std::map<std::tuple<Key, char, Key>, Key> forced_;
    std::vector<std::function<void()>> trail_;
    std::vector<MorphismTable> found_;

    const std::vector<Key>& hom(const Key& a, const Key& b) {
        auto it = homs_.find({a, b});
        if (it == homs_.end()) it = homs_.emplace(std::make_pair(a, b), c_.hom(a, b)).first;
        return it->second;
    }

    template <class M, class K>
    void put(M& map, const K& k, const Key& v) {
        map[k] = v;
        trail_.push_back([&map, k] { map.erase(k); });
    }

    void undo(std::size_t mark) {
        while (trail_.size() > mark) {
            trail_.back()();
            trail_.pop_back();
        }
    }

    bool done(const Key& X) const { return pos_.at(X) < current_; }
    std::size_t current_ = 0;

    std::optional<Key> look(char sort, const Key& X, const Key& k) const {
        const auto& m = sort == 'T' ? fty_ : ftm_;
        auto it = m.find({X, k});
        if (it == m.end()) return std::nullopt;
        return it->second;
    }

    std::pair<Got, Key> mor(const Key& s) {
        auto it = fmor_.find(s);
        if (it != fmor_.end()) return {Got::Ok, it->second};
        const Key Z = c_.dom(s), X = c_.cod(s);
        if (!fobj_.count(Z) || !fobj_.count(X)) return {Got::Unknown, ""};
        Key val;
        try {
            if (X == c_.empty()) {
                val = d_.to_terminal(fobj_.at(Z));
            } else {
                const auto& p = parent_.at(X);
                auto [g, gv] = mor(c_.compose(p.e.proj, s));
                if (g != Got::Ok) return {g, ""};
                auto a = look('t', Z, c_.subst_tm(s, p.e.var));
                auto T = look('T', p.from, p.type);
                if (!a || !T) return {Got::Unknown, ""};
                val = indsub(d_, gv, *a, *T);
            }
        } catch (const std::exception&) {
            return {Got::Bad, ""};
        }
        put(fmor_, s, val);
        return {Got::Ok, val};
    }

    void visit(std::size_t i) {
        if (found_.size() >= cap_) return;
        if (i == order_.size()) {
            finish();
            return;
        }
        current_ = i;
        std::size_t mark = trail_.size();
        if (start(order_[i])) assign(i);
        current_ = i;
        undo(mark);
    }

    bool start(const Key& X) {
        try {
            if (X == c_.empty()) {
                put(fobj_, X, d_.empty());
            } else {
                const auto& p = parent_.at(X);
                put(fobj_, X, d_.ext(fobj_.at(p.from), fty_.at({p.from, p.type})).extended);
            }
            const Key FX = fobj_.at(X);
            for (const auto& [k, v] : pins_.fixed)
                if (std::get<0>(k) == X && !force(std::get<1>(k), std::get<2>(k), v)) return false;
            for (const auto& ed : into_[X]) {
                if (!done(ed.from)) continue;
                auto de = d_.ext(fobj_.at(ed.from), fty_.at({ed.from, ed.type}));
                if (de.extended != FX) return false;
                if (!force('t', ed.e.var, de.var)) return false;
                for (const auto& A : tys_[ed.from])
                    if (!force('T', c_.subst_ty(ed.e.proj, A), d_.subst_ty(de.proj, fty_.at({ed.from, A}))))
                        return false;
                for (const auto& a : tms_[ed.from])
                    if (!force('t', c_.subst_tm(ed.e.proj, a), d_.subst_tm(de.proj, ftm_.at({ed.from, a}))))
                        return false;
            }
        } catch (const std::exception&) {
            return false;
        }
        return true;
    }

    bool force(char sort, const Key& k, const Key& v) {
        const Key X = order_[current_];
        auto key = std::make_tuple(X, sort, k);
        auto it = forced_.find(key);
        if (it != forced_.end()) return it->second == v;
        put(forced_, key, v);
        return true;
    }

    // Value implied by naturality along some s : X -> Y with Y already assigned.
    std::optional<Key> derived(const Key& X, char sort, const Key& k) {
        for (std::size_t j = 0; j < current_; ++j) {
            const Key& Y = order_[j];
            for (const auto& s : hom(X, Y)) {
                const auto& entries = sort == 'T' ? tys_[Y] : tms_[Y];
                for (const auto& y : entries) {
                    Key ys = sort == 'T' ? c_.subst_ty(s, y) : c_.subst_tm(s, y);
                    if (ys != k) continue;
                    auto [g, gv] = mor(s);
                    if (g != Got::Ok) break;
                    auto Fy = look(sort, Y, y);
                    if (!Fy) continue;
                    return sort == 'T' ? d_.subst_ty(gv, *Fy) : d_.subst_tm(gv, *Fy);
                }
            }
        }
        return std::nullopt;
    }

    void assign(std::size_t i) {
        const Key& X = order_[i];
        const Key FX = fobj_.at(X);
        // forced first
        for (char sort : {'T', 't'})
            for (const auto& k : sort == 'T' ? tys_[X] : tms_[X]) {
                if (look(sort, X, k)) continue;
                auto it = forced_.find({X, sort, k});
                if (it != forced_.end()) return branch(i, sort, k, {it->second});
            }
        for (char sort : {'T', 't'})
            for (const auto& k : sort == 'T' ? tys_[X] : tms_[X]) {
                if (look(sort, X, k)) continue;
                std::optional<Key> v;
                try {
                    v = derived(X, sort, k);
                } catch (const std::exception&) {
                    return;
                }
                if (v) return branch(i, sort, k, {*v});
            }
        for (const auto& A : tys_[X])
            if (!look('T', X, A)) return branch(i, 'T', A, d_.ty(FX));
        for (const auto& a : tms_[X]) {
            if (look('t', X, a)) continue;
            std::vector<Key> cands;
            const Key want = fty_.at({X, c_.type_of(X, a)});
            for (const auto& b : d_.tm(FX))
                if (d_.type_of(FX, b) == want) cands.push_back(b);
            return branch(i, 't', a, cands);
        }
        if (complete(X)) visit(i + 1);
    }

    void branch(std::size_t i, char sort, const Key& k, const std::vector<Key>& cands) {
        const Key& X = order_[i];
        for (const auto& v : cands) {
            if (found_.size() >= cap_) return;
            std::size_t mark = trail_.size();
            put(sort == 'T' ? fty_ : ftm_, std::make_pair(X, k), v);
            if (consistent(X)) assign(i);
            current_ = i;
            undo(mark);
        }
    }

    // Typing and naturality among everything assigned so far that touches X.
    bool consistent(const Key& X) {
        try {
            const Key FX = fobj_.at(X);
            for (const auto& a : tms_[X]) {
                auto Fa = look('t', X, a);
                auto FA = look('T', X, c_.type_of(X, a));
                if (Fa && FA && d_.type_of(FX, *Fa) != *FA) return false;
            }
            for (std::size_t j = 0; j <= current_; ++j) {
                const Key& Y = order_[j];
                if (!natural(X, Y)) return false;
                if (Y != X && !natural(Y, X)) return false;
            }
        } catch (const std::exception&) {
            return false;
        }
        return true;
    }

    bool natural(const Key& Z, const Key& Y) {
        for (const auto& s : hom(Z, Y)) {
            auto [g, gv] = mor(s);
            if (g == Got::Bad) return false;
            if (g == Got::Unknown) continue;
            for (const auto& A : tys_[Y]) {
                auto FA = look('T', Y, A);
                if (!FA) continue;
                auto lhs = look('T', Z, c_.subst_ty(s, A));
                if (lhs && *lhs != d_.subst_ty(gv, *FA)) return false;
            }
            for (const auto& a : tms_[Y]) {
                auto Fa = look('t', Y, a);
                if (!Fa) continue;
                auto lhs = look('t', Z, c_.subst_tm(s, a));
                if (lhs && *lhs != d_.subst_tm(gv, *Fa)) return false;
            }
        }
        return true;
    }

    // Strictness on every extension edge between X and finished objects.
    bool complete(const Key& X) {
        try {
            for (const auto& A : tys_[X])
                if (!d_.is_type(fobj_.at(X), fty_.at({X, A}))) return false;
            auto edge_ok = [&](const Edge& ed, const Key& to) {
                auto de = d_.ext(fobj_.at(ed.from), fty_.at({ed.from, ed.type}));
                if (de.extended != fobj_.at(to)) return false;
                auto [g, gv] = mor(ed.e.proj);
                if (g != Got::Ok || gv != de.proj) return false;
                auto q = look('t', to, ed.e.var);
                return q && *q == de.var;
            };
            for (const auto& ed : into_[X])
                if ((done(ed.from) || ed.from == X) && !edge_ok(ed, X)) return false;
            for (std::size_t j = 0; j < current_; ++j)
                for (const auto& ed : into_[order_[j]])
                    if (ed.from == X && !edge_ok(ed, order_[j])) return false;
        } catch (const std::exception&) {
            return false;
        }
        return true;
    }

    void finish() {
        MorphismTable t;
        t.obj = fobj_;
        t.ty = fty_;
        t.tm = ftm_;
        for (const auto& X : order_)
            for (const auto& Y : order_)
                for (const auto& s : hom(X, Y)) {
                    auto [g, gv] = mor(s);
                    if (g != Got::Ok) return;
                    t.mor[s] = gv;
                }
        if (pins_.accept && !pins_.accept(t)) return;
        found_.push_back(std::move(t));
    }
};

}  // namespace

UniquenessReport count_strict_morphisms(ModelPtr C, ModelPtr D, int bound, const Pins& pins, std::size_t cap) {
    UniquenessReport out;
    out.report = Report("strict morphisms " + C->name() + " -> " + D->name(), bound);
    try {
        Search s(C, D, bound, pins, cap);
        out.found = s.run();
    } catch (const Undefined& ex) {
        out.report.fail("fragment", ex.what());
        return out;
    }
    out.count = out.found.size();
    return out;
}

UniquenessReport verify_unique(const NMorphism& F, int bound, const Pins& pins) {
    auto out = count_strict_morphisms(F.src, F.tgt, bound, pins, 2);
    if (!out.report.ok()) return out;
    if (out.count == 0) {
        out.report.fail("existence", "no strict morphism satisfies the constraints");
        return out;
    }
    if (out.count > 1) out.report.fail("uniqueness", "a second strict morphism satisfies the constraints");
    MorphismTable mine = tabulate(F, bound);
    out.matches = out.count == 1 && out.found[0] == mine;
    if (out.count == 1 && !out.matches) out.report.fail("agreement", "the survivor differs from " + F.name);
    return out;
}

}  // namespace natmod
