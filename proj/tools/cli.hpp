#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fdeflow::cli {

enum ExitCode : int { kOk = 0, kSolverFailure = 1, kUsage = 2 };

/// Runs one `fdeflow` invocation. `args` excludes the program name. CSV and
/// check tables go to `out` unless --out is given; the JSON summary goes to
/// `err` unless --summary is given.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fdeflow::cli
