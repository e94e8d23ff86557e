#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ckgraph::cli {

inline constexpr int kExitDecided = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitUnknown = 2;

// Runs one command; reports go to out (or --out), diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ckgraph::cli
