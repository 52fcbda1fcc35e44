#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sketchsearch {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// The `sketchsearch` command line. args[0] is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sketchsearch
