#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace spot::cli {

enum ExitCode : int { kOk = 0, kVerifyFailed = 1, kMalformed = 2, kMissingState = 3 };

// Runs one invocation; args exclude the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace spot::cli
