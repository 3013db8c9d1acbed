#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace toric_hk::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitInputError = 2;

// args[0] is the program name. Reports go to out, diagnostics to err.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace toric_hk::cli
