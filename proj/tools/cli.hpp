#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cyclograph::cli {

// Exit codes: 0 success, 1 failed self-check, 2 input error, 3 cap exceeded.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cyclograph::cli
