#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bubble::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitSolver = 3;
inline constexpr int kExitUsage = 64;

/// Entry point of the `bubble` executable. Subcommands: solve, continue,
/// verify, certify, export.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Convenience overload; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace bubble::cli
