#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace totient::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNegative = 1;  // nontotient, invalid certificate, partition "no"
inline constexpr int kExitError = 2;     // bad input, I/O failure, inconclusive

/// Runs one command line. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace totient::cli
