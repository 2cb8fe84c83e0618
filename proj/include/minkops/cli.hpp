#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace minkops {

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitPass = 0, kExitFail = 1, kExitInputError = 2 };

/// Runs `minkops <command> ...` with argv[0] the program name. Documents go to
/// `out` (or the --out file), diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Same, taking the arguments after the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace minkops
