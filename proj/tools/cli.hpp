#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

namespace splitcubic::cli {

inline constexpr const char* kToolVersion = "1.0.0";

// Runs one invocation (args excludes the program name). JSON results go to
// `out`, machine-readable error objects to `err`. Returns the exit status:
// 0 success, 1 internal failure, 2 precondition or usage error, 3 budget.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Hex SHA-256 of a file's bytes.
std::string sha256_file(const std::string& path);

// Golden-value suite; each entry {"name", "ok", "detail"}.
nlohmann::json selftest_checks();

}  // namespace splitcubic::cli
