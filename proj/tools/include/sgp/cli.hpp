#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sgp {

/// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;       // config, auth and other errors
inline constexpr int kExitUsage = 2;         // unreadable or unparseable input, unknown task or mode
inline constexpr int kExitUnanswerable = 3;  // the strategy found no unique answer
inline constexpr int kExitAllFailed = 4;     // run: every instance failed

/// Runs the command line `args` (without the program name), writing to `out`
/// and `err`. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sgp
