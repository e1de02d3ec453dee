#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace eif::cli {

inline constexpr const char* kVersion = "1.0.0";

enum ExitCode : int { kOk = 0, kUsage = 1, kDataError = 2 };

/// Runs one subcommand. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace eif::cli
