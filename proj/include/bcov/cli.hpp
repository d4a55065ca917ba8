#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bcov {

inline constexpr const char* kToolVersion = "bcov 0.1.0";

// exit codes: 0 all pass, 1 check failure, 2 usage/config error, 3 truncation underflow
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bcov
