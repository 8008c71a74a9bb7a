#include "natmod/models.hpp"

#include <charconv>

namespace natmod {

namespace {

std::optional<int> to_int(const Key& k) {
    int v = 0;
    auto [p, ec] = std::from_chars(k.data(), k.data() + k.size(), v);
    if (ec != std::errc() || p != k.data() + k.size() || k.empty()) return std::nullopt;
    return v;
}

int index_of(const Key& k, const std::string& what) {
    auto v = to_int(k);
    if (!v || *v < 0) throw MalformedInput(what + ": " + k);
    return *v;
}

std::vector<int> iota(int n) {
    std::vector<int> v(n);
    for (int i = 0; i < n; ++i) v[i] = i;
    return v;
}

}  // namespace

// ---- term model ----

std::vector<Key> TermModel::ty(const Key&) const {
    std::vector<Key> out;
    for (int i = 0; i < index_size(); ++i) out.push_back(std::to_string(i));
    return out;
}

std::vector<Key> TermModel::tm(const Key& ctx) const {
    std::vector<Key> out;
    auto n = static_cast<int>(parse_int_list(ctx).size());
    for (int i = 0; i < n; ++i) out.push_back(std::to_string(i));
    return out;
}

Key TermModel::type_of(const Key& ctx, const Key& a) const {
    auto u = parse_int_list(ctx);
    int i = index_of(a, "term");
    if (i >= static_cast<int>(u.size())) throw Undefined("no position " + a + " in " + ctx);
    return std::to_string(u[i]);
}

Key TermModel::subst_ty(const Key&, const Key& A) const { return A; }

Key TermModel::subst_tm(const Key& s, const Key& a) const {
    auto fn = FinSliceOp::function(s);
    int i = index_of(a, "term");
    if (i >= static_cast<int>(fn.size())) throw Undefined("no position " + a + " in " + cod(s));
    return std::to_string(fn[i]);
}

ExtData TermModel::ext(const Key& ctx, const Key& A) const {
    if (!is_type(ctx, A)) throw Undefined("not a type: " + A);
    auto u = parse_int_list(ctx);
    const int n = static_cast<int>(u.size());
    auto v = u;
    v.push_back(index_of(A, "type"));
    return {int_list(v), FinSliceOp::morphism(v, u, iota(n)), std::to_string(n)};
}

std::optional<Key> TermModel::pair(const Key& s, const Key& A, const Key& a) const {
    auto parts = mor_parts(s);
    auto v = parse_int_list(parts[0]), u = parse_int_list(parts[1]);
    if (type_of(parts[0], a) != A) throw Undefined("<" + s + ", " + a + ">: term not of type " + A);
    auto fn = FinSliceOp::function(s);
    fn.push_back(index_of(a, "term"));
    u.push_back(index_of(A, "type"));
    return FinSliceOp::morphism(v, u, fn);
}

bool TermModel::is_type(const Key&, const Key& A) const {
    auto v = to_int(A);
    return v && *v >= 0 && *v < index_size() && std::to_string(*v) == A;
}

bool TermModel::is_term(const Key& ctx, const Key& a) const {
    auto v = to_int(a);
    return v && *v >= 0 && *v < static_cast<int>(parse_int_list(ctx).size()) && std::to_string(*v) == a;
}

std::shared_ptr<const TermModel> term_model(int index_size, int bound) {
    if (index_size < 0) throw MalformedInput("negative index set");
    return std::make_shared<TermModel>(index_size, bound);
}

// ---- propositions over finite sets ----

Key FamProp::function(int dom, int cod, const std::vector<int>& fn) {
    return mor_key(std::to_string(dom), std::to_string(cod), int_list(fn));
}

std::vector<Key> FamProp::objects(int bound) const {
    std::vector<Key> out;
    for (int i = 0; i <= std::max(bound, 1); ++i) out.push_back(std::to_string(i));
    return out;
}

std::vector<Key> FamProp::hom(const Key& src, const Key& dst) const {
    int m = index_of(src, "object"), n = index_of(dst, "object");
    std::vector<Key> out;
    if (m > 0 && n == 0) return out;
    std::vector<int> fn(m, 0);
    while (true) {
        out.push_back(function(m, n, fn));
        int k = m;
        while (k > 0) {
            --k;
            if (++fn[k] < n) break;
            fn[k] = 0;
            if (k == 0) return out;
        }
        if (m == 0) return out;
    }
}

Key FamProp::compose(const Key& g, const Key& f) const {
    auto fp = mor_parts(f), gp = mor_parts(g);
    if (fp[1] != gp[0]) throw Undefined("compose: " + g + " . " + f);
    auto ff = parse_int_list(fp[2]), gf = parse_int_list(gp[2]);
    std::vector<int> out(ff.size());
    for (std::size_t k = 0; k < ff.size(); ++k) out[k] = gf[ff[k]];
    return mor_key(fp[0], gp[1], int_list(out));
}

Key FamProp::identity(const Key& x) const {
    int n = index_of(x, "object");
    return function(n, n, iota(n));
}

std::vector<Key> FamProp::ty(const Key& ctx) const {
    int n = index_of(ctx, "object");
    std::vector<Key> out;
    for (int bits = 0; bits < (1 << n); ++bits) {
        std::vector<int> v(n);
        for (int i = 0; i < n; ++i) v[i] = (bits >> (n - 1 - i)) & 1;
        out.push_back(int_list(v));
    }
    return out;
}

std::vector<Key> FamProp::tm(const Key& ctx) const {
    return {int_list(std::vector<int>(index_of(ctx, "object"), 1))};
}

Key FamProp::type_of(const Key& ctx, const Key& a) const {
    if (!is_term(ctx, a)) throw Undefined("not a term: " + a);
    return a;
}

Key FamProp::subst_ty(const Key& s, const Key& A) const {
    auto fn = parse_int_list(mor_parts(s)[2]);
    auto bits = parse_int_list(A);
    std::vector<int> out(fn.size());
    for (std::size_t k = 0; k < fn.size(); ++k) out[k] = bits.at(fn[k]);
    return int_list(out);
}

ExtData FamProp::ext(const Key& ctx, const Key& A) const {
    if (!is_type(ctx, A)) throw Undefined("not a type: " + A + " over " + ctx);
    auto bits = parse_int_list(A);
    std::vector<int> incl;
    for (int i = 0; i < static_cast<int>(bits.size()); ++i)
        if (bits[i]) incl.push_back(i);
    const int k = static_cast<int>(incl.size());
    return {std::to_string(k), function(k, static_cast<int>(bits.size()), incl),
            int_list(std::vector<int>(k, 1))};
}

std::optional<Key> FamProp::pair(const Key& s, const Key& A, const Key& a) const {
    auto parts = mor_parts(s);
    if (!is_term(parts[0], a)) throw Undefined("<" + s + ", " + a + ">: not a term");
    auto fn = parse_int_list(parts[2]);
    auto bits = parse_int_list(A);
    std::vector<int> rank(bits.size(), -1);
    int k = 0;
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (bits[i]) rank[i] = k++;
    std::vector<int> out(fn.size());
    for (std::size_t j = 0; j < fn.size(); ++j) {
        if (rank.at(fn[j]) < 0) throw Undefined("<" + s + ", " + a + ">: " + A + " fails at " + std::to_string(j));
        out[j] = rank[fn[j]];
    }
    return mor_key(parts[0], std::to_string(k), int_list(out));
}

bool FamProp::is_type(const Key& ctx, const Key& A) const {
    try {
        auto bits = parse_int_list(A);
        if (static_cast<int>(bits.size()) != index_of(ctx, "object")) return false;
        for (int b : bits)
            if (b != 0 && b != 1) return false;
        return true;
    } catch (const MalformedInput&) {
        return false;
    }
}

bool FamProp::is_term(const Key& ctx, const Key& a) const { return tm(ctx).front() == a; }

namespace {

// B lives over the comprehension of A; read it back along the true positions of A.
std::vector<int> along(const std::vector<int>& A, const std::vector<int>& B) {
    std::vector<int> out(A.size(), 0);
    std::size_t k = 0;
    for (std::size_t i = 0; i < A.size(); ++i)
        if (A[i]) out[i] = B.at(k++);
    if (k != B.size()) throw Undefined("family has the wrong length");
    return out;
}

}  // namespace

SigmaStructure FamProp::sigma() const {
    SigmaStructure s;
    s.sigma = [](const Key&, const Key& A, const Key& B) {
        auto a = parse_int_list(A), b = along(a, parse_int_list(B));
        for (std::size_t i = 0; i < a.size(); ++i) a[i] = a[i] && b[i];
        return int_list(a);
    };
    s.pair = [](const Key& ctx, const Key&, const Key&, const Key&, const Key&) {
        return int_list(std::vector<int>(std::stoi(ctx), 1));
    };
    return s;
}

PiStructure FamProp::pi() const {
    PiStructure s;
    s.pi = [](const Key&, const Key& A, const Key& B) {
        auto a = parse_int_list(A), b = along(a, parse_int_list(B));
        for (std::size_t i = 0; i < a.size(); ++i) a[i] = !a[i] || b[i];
        return int_list(a);
    };
    s.lam = [](const Key& ctx, const Key&, const Key&, const Key&) {
        return int_list(std::vector<int>(std::stoi(ctx), 1));
    };
    return s;
}

std::shared_ptr<const FamProp> fam_prop(int bound) { return std::make_shared<FamProp>(bound); }

ExtData IdentityClassifier::ext(const Key& ctx, const Key& A) const {
    if (A != "*") throw Undefined("not a type: " + A);
    return {ctx, inner_->identity(ctx), "*"};
}

}  // namespace natmod
