#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace finslerctl {

enum ExitCode { kOk = 0, kViolations = 1, kConfigError = 2, kNumericalFailure = 3 };

/// Runs one command line (without the program name). The report goes to
/// --out when given, otherwise to `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace finslerctl
