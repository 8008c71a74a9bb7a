#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace natmod {

struct Violation {
    std::string law;
    std::string detail;
};

// Outcome of a bounded check. Violations are data, never exceptions.
struct Report {
    std::string name;
    int bound = 0;
    std::vector<Violation> violations;
    std::size_t total = 0;   // counts violations beyond the stored cap too
    std::vector<std::string> notes;

    static constexpr std::size_t kStored = 64;

    Report() = default;
    Report(std::string n, int b) : name(std::move(n)), bound(b) {}

    bool ok() const { return total == 0; }
    void fail(std::string law, std::string detail);
    void merge(const Report& other, const std::string& prefix = "");
    bool cites(const std::string& law) const;
    std::string caveat() const;
    std::string text() const;
};

}  // namespace natmod
