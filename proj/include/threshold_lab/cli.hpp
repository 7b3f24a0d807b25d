#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace threshold_lab::cli {

enum ExitCode : int {
  kOk = 0,
  kVerifyFailed = 1,
  kUsage = 2,
  kResourceGuard = 3,
  kIoError = 4,
};

/// Runs the command line `args` (args[0] is the program name) writing
/// results to `out` and diagnostics to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace threshold_lab::cli
