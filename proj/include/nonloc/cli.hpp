#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nonloc {

/// Exit codes shared by every command.
enum ExitCode : int { kExitOk = 0, kExitNegative = 1, kExitUsage = 2 };

/// Runs one command line (without the program name). Output goes to `out`
/// unless --out names a file; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace nonloc
