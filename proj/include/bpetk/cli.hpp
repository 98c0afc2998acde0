#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bpetk {

// Process exit codes of the command line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitViolation = 1,
  kExitParse = 2,
  kExitIo = 3,
  kExitImproper = 4,
  kExitLookahead = 5,
};

// Runs the `bpetk` command line with `args` (program name excluded) against
// the given streams and returns the exit code.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err);

}  // namespace bpetk
