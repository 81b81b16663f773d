#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace confperf::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 2,
  kData = 3,
  kRuntime = 4,
};

/// Runs the confperf command line. `args` excludes the program name.
/// Primary output goes to `out`; errors go to `err` as one line of the form
/// "error: <usage|data|runtime>: <message>".
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace confperf::cli
