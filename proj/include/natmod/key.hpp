#pragma once

#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace natmod {

// Objects, morphisms, types and terms are all identified by canonical strings.
using Key = std::string;

struct MalformedInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised when a partial operation is applied outside its domain of definition.
struct Undefined : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Key tup(std::initializer_list<std::string_view> parts);
Key tup(const std::vector<Key>& parts);

// Inverse of tup: splits "(a,b,c)" at top-level commas. Brackets nest.
std::vector<Key> split_tup(std::string_view k);

// "[1,2,3]" <-> {1,2,3}
Key int_list(const std::vector<int>& xs);
std::vector<int> parse_int_list(std::string_view k);

bool starts_with(std::string_view s, std::string_view prefix);

}  // namespace natmod
