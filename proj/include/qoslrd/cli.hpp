#pragma once

#include <string>
#include <vector>

namespace qoslrd::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitRuntime = 2;

/// Runs one `qoslrd` invocation. `args` excludes the program name.
/// Validation failures return 1 and runtime failures 2; either way a single
/// JSON error line goes to stderr and no output files are written.
int run(const std::vector<std::string>& args);

int run(int argc, const char* const* argv);

}  // namespace qoslrd::cli
