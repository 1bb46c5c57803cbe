#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ehgo::cli {

// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kConfigError = 2,
  kSimulationFault = 3,
  kIoError = 4,
};

/// Entry point shared by the executable and the tests. args excludes argv[0].
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ehgo::cli
