#pragma once

#include <ostream>

namespace anosov {

inline constexpr int kExitPass = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitNotCertified = 2;

// Parses and runs one subcommand.  Returns 0 on pass, 2 when the pipeline ran
// but did not certify, 1 on bad input or any other error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace anosov
