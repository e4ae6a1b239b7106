#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace settag::cli {

// Exit codes of the settag tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

// Runs one settag invocation. `args` excludes the program name. Output that
// has no --out destination goes to `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace settag::cli
