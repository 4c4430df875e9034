#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ckme::cli {

enum ExitCode : int {
  kSuccess = 0,
  kValidationFailure = 1,
  kRuntimeError = 2,
};

/// Runs one `ckme` invocation. `args` excludes the program name.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace ckme::cli
