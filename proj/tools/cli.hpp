#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace wcospec::cli {

inline constexpr int kExitCertified = 0;
inline constexpr int kExitSelftestFailure = 1;
inline constexpr int kExitWindowEmpty = 2;
inline constexpr int kExitFailed = 3;
inline constexpr int kExitUsage = 64;

// Runs the command line; reports go to --out or `out`, messages to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wcospec::cli
