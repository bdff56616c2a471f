#pragma once

#include <iosfwd>

namespace errest {

/// Process exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitInputError = 2,
  kExitNotConverged = 3,
};

/// Entry point of the `errest` tool with subcommands estimate, evaluate and
/// synth. Output normally destined for stdout/stderr goes to `out`/`err`, so
/// tests can run commands in-process.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace errest
