#pragma once

#include <ostream>

namespace sncl {

enum ExitCode : int { kExitOk = 0, kExitExpectation = 1, kExitUsage = 2, kExitBudget = 3 };

/// Entry point of the `sncl` tool; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sncl
