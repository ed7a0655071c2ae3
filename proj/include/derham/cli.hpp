#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace derham {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitAssertionFailed = 1;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitNotStabilized = 3;
inline constexpr int kExitHypothesisNotMet = 4;

// Full command-line entry point; args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace derham
