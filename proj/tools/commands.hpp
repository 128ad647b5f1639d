#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace taufpl::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kData = 2,
  kNumerical = 3,
};

/// Runs one command line (without the program name). Machine-readable
/// output goes to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace taufpl::cli
