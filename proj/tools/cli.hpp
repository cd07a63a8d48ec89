#pragma once

#include <iosfwd>

namespace localfield::cli {

enum ExitCode : int {
  kOk = 0,
  kValidationFailed = 1,
  kUsage = 2,
  kDomain = 3,
  kNonConvergence = 4,
};

/// Entry point shared by the executable and the in-process tests.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace localfield::cli
