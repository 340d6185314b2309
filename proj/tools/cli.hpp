#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kwakim::cli {

/// Exit codes: 0 every check passed, 1 a numerical check failed, 2 the command
/// line or the config document is invalid.
enum ExitCode : int { ok = 0, numerical_failure = 1, schema_error = 2 };

/// Runs one subcommand. The JSON report goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kwakim::cli
