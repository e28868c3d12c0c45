#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bayescmp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitNotConverged = 2;

/// Runs the command line `args` (without the program name). Reports and
/// exports go to the output directory; messages go to `out` and `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace bayescmp::cli
