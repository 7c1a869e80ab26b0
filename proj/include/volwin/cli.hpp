#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace volwin::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int { kOk = 0, kUsage = 1, kDataError = 2, kNumericalFailure = 3 };

/// Environment variable naming the default output directory.
inline constexpr const char* kOutDirEnv = "VOLWIN_OUT_DIR";

int run(int argc, char** argv);
/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace volwin::cli
