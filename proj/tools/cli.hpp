#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace natmod {

// Exit codes: 0 every check passed, 1 some check failed, 2 bad arguments or input files.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace natmod
