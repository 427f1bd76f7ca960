#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ncspace::cli {

/// Exit codes: 0 all checks pass, 1 a check failed, 2 bad arguments or config.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitBadInput = 2;

/// Runs one command line; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ncspace::cli
