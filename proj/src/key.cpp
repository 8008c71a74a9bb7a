#include "natmod/key.hpp"
#include "natmod/report.hpp"

#include <sstream>

namespace natmod {

Key tup(std::initializer_list<std::string_view> parts) {
    Key out = "(";
    bool first = true;
    for (auto p : parts) {
        if (!first) out += ',';
        out += p;
        first = false;
    }
    out += ')';
    return out;
}

Key tup(const std::vector<Key>& parts) {
    Key out = "(";
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += ',';
        out += parts[i];
    }
    out += ')';
    return out;
}

std::vector<Key> split_tup(std::string_view k) {
    if (k.size() < 2 || k.front() != '(' || k.back() != ')')
        throw MalformedInput("not a tuple key: " + std::string(k));
    std::vector<Key> out;
    std::string_view body = k.substr(1, k.size() - 2);
    if (body.empty()) return out;
    int depth = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i < body.size(); ++i) {
        char c = body[i];
        if (c == '(' || c == '[') ++depth;
        else if (c == ')' || c == ']') --depth;
        else if (c == ',' && depth == 0) {
            out.emplace_back(body.substr(start, i - start));
            start = i + 1;
        }
    }
    out.emplace_back(body.substr(start));
    return out;
}

Key int_list(const std::vector<int>& xs) {
    Key out = "[";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(xs[i]);
    }
    out += ']';
    return out;
}

std::vector<int> parse_int_list(std::string_view k) {
    if (k.size() < 2 || k.front() != '[' || k.back() != ']')
        throw MalformedInput("not an integer list: " + std::string(k));
    std::vector<int> out;
    std::string_view body = k.substr(1, k.size() - 2);
    std::size_t i = 0;
    while (i < body.size()) {
        std::size_t j = body.find(',', i);
        if (j == std::string_view::npos) j = body.size();
        out.push_back(std::stoi(std::string(body.substr(i, j - i))));
        i = j + 1;
    }
    return out;
}

bool starts_with(std::string_view s, std::string_view prefix) {
    return s.substr(0, prefix.size()) == prefix;
}

void Report::fail(std::string law, std::string detail) {
    ++total;
    if (violations.size() < kStored) violations.push_back({std::move(law), std::move(detail)});
}

void Report::merge(const Report& other, const std::string& prefix) {
    for (const auto& v : other.violations)
        if (violations.size() < kStored) violations.push_back({prefix + v.law, v.detail});
    total += other.total;
    for (const auto& n : other.notes) notes.push_back(prefix + n);
}

bool Report::cites(const std::string& law) const {
    for (const auto& v : violations)
        if (v.law == law) return true;
    return false;
}

std::string Report::caveat() const { return "verified up to bound " + std::to_string(bound); }

std::string Report::text() const {
    std::ostringstream os;
    os << name << ": " << (ok() ? "pass" : "FAIL") << " (" << caveat() << ")";
    if (total) os << ", " << total << " violation(s)";
    os << '\n';
    for (const auto& v : violations) os << "  [" << v.law << "] " << v.detail << '\n';
    if (total > violations.size()) os << "  ... " << total - violations.size() << " more\n";
    for (const auto& n : notes) os << "  note: " << n << '\n';
    return os.str();
}

}  // namespace natmod
