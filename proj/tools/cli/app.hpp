#ifndef CONVSTAT_CLI_APP_HPP_
#define CONVSTAT_CLI_APP_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace convstat::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNumerical = 3;

/// Runs the command line `args` (without the program name). Exit codes:
/// 0 when a result was computed, 2 for input errors, 3 for numerical failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace convstat::cli

#endif  // CONVSTAT_CLI_APP_HPP_
