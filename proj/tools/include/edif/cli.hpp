#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace edif::cli {

enum ExitCode : int { kPass = 0, kViolation = 1, kIndeterminate = 2, kInputError = 3 };

/// Runs one command line (without the program name). Reports go to `out`,
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace edif::cli
