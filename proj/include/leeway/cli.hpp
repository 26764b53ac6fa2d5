#pragma once

#include <string>
#include <vector>

namespace leeway::cli {

/// Entry point shared by the leeway binary and the tests.
/// Exit codes: 0 success, 1 domain/parse/data error, 2 usage error.
int run(const std::vector<std::string>& args);

}  // namespace leeway::cli
