#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "shiftdecon/error.hpp"

namespace shiftdecon::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kNumerical = 2, kIo = 3 };

/// Exit code a library error maps to.
int exit_code_for(ErrorKind kind) noexcept;

/// Runs one CLI invocation. `args` excludes the program name. Diagnostics go to
/// `err` as `ERROR <Name>: <detail>`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace shiftdecon::cli
