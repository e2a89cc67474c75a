#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace asrbias {

/// Exit statuses: 0 success, 1 input or validation error, 2 internal failure.
enum ExitCode : int { kExitOk = 0, kExitInput = 1, kExitInternal = 2 };

/// Entry point behind the `asrbias` binary; args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace asrbias
