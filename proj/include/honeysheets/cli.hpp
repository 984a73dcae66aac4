#pragma once

#include <string>
#include <vector>

namespace honeysheets::cli {

/// Exit codes: 0 success, 1 usage error, 2 data or I/O error.
/// Diagnostics go to stderr only.
int run(int argc, char** argv);

/// Same, with the arguments that follow the program name.
int run(const std::vector<std::string>& args);

} // namespace honeysheets::cli
