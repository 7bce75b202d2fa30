#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lapreg::cli {

inline constexpr const char* kVersion = "0.1.0";

// Exit codes: 0 success, 1 runtime or contract failure, 2 usage error.
// Errors go to `err` as a single JSON object {"error": kind, "message": text}.
// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lapreg::cli
