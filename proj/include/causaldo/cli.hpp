#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace causaldo {

/// Exit codes: 0 ok, 1 malformed flags, 2 file or format error, 3 numerical failure.
enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitFile = 2, kExitNumerical = 3 };

/// Runs one CLI invocation. args[0] is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace causaldo
