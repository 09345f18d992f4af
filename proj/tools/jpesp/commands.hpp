#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace jpesp::cli {

enum ExitCode : int {
  kOk = 0,
  kInvalidInput = 2,
  kInfeasible = 3,
  kNumeric = 4,
};

/// Parses argv and runs the selected subcommand (gen, solve, fit, sweep).
/// Errors are reported on `err`; the return value is the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// --threads fallback: JPESP_THREADS if set to a positive integer, else 1.
unsigned default_threads();

}  // namespace jpesp::cli
