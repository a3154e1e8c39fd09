#pragma once

#include <string>
#include <vector>

namespace rss::cli {

inline constexpr const char* kToolVersion = "0.1.0";

// Exit codes: 0 success, 2 usage/parse error, 3 input validation error,
// 4 infeasible parameters or bounds, 5 internal error.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);  // args without the program name

}  // namespace rss::cli
