#pragma once

#include <iosfwd>

namespace deeplq {

/// Entry point of the command-line tool. Returns the process exit code:
/// 0 success, 1 domain failure, 2 input error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace deeplq
