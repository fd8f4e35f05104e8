#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mtasep::cli {

enum ExitCode : int {
  kSuccess = 0,
  kInternalError = 1,
  kInputError = 2,
  kVerificationFailed = 3,
  kResourceBound = 4,
};

/// Runs one command line (args excludes the program name). Results go to
/// `out`, diagnostics to `err`; returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mtasep::cli
