#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bloodflow::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitProcessing = 3;
inline constexpr int kExitNoSignal = 4;

/// Runs the `bloodflow` command line. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bloodflow::cli
