#pragma once

#include <iosfwd>

namespace satbench::cli {

enum ExitCode : int { kSuccess = 0, kUsage = 1, kDataError = 2, kBackendError = 3 };

/// Runs the command-line tool. Diagnostics go to `err`, normal output to `out`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace satbench::cli
