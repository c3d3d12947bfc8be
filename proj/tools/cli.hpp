#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ultrastrong::cli {

enum ExitCode : int { kOk = 0, kComputationFailure = 1, kValidationFailure = 2 };

inline constexpr int kSchemaVersion = 1;

/// Runs the command line `args` (without the program name). Reports go to
/// `out` (or the --output file), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Shortest round-trip decimal form of `x`.
std::string format_number(double x);

}  // namespace ultrastrong::cli
