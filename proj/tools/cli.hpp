#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace coref::cli {

enum ExitCode : int { ok = 0, input_error = 1, invariant_violation = 2 };

/// Runs the `coref` command line. Results go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace coref::cli
