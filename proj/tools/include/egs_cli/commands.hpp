#pragma once

#include <iosfwd>

namespace egs::cli {

/// Entry point of the `egs` tool. Returns the process exit code:
/// 0 success, 1 configuration error, 2 solver failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace egs::cli
