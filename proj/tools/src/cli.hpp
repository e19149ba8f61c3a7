#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace graphsys::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command line (without the program name). Returns the exit code:
/// 0 on success, 2 on usage errors, 1 on runtime errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace graphsys::cli
