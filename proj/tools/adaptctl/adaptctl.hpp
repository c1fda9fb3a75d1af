#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace adaptctl {

enum ExitCode : int { kOk = 0, kDomainError = 1, kUsageOrIo = 2 };

/// Runs one command line (without the program name) and returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace adaptctl
