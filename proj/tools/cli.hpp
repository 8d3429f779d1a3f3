#pragma once

#include <iosfwd>

namespace varbvp::cli {

enum ExitCode : int {
  kOk = 0,
  kUnexpected = 1,
  kConvergenceFailure = 2,
  kInvalidConfig = 3,
  kNonRegular = 4,
};

/// Entry point of the `varbvp` tool. CSV goes to `out` unless --out is given;
/// diagnostics go to standard error, filtered by VARBVP_LOG.
int run(int argc, const char* const* argv, std::ostream& out);

}  // namespace varbvp::cli
