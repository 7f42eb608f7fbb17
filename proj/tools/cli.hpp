#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace fqfi::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kEmpty = 2, kVerifyFailed = 3 };

/// Runs the command line `args` (args[0] is the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// 17 significant digits, scientific, '.' separator regardless of locale.
std::string format_number(double v);

}  // namespace fqfi::cli
