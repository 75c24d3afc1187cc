#pragma once

#include <iosfwd>

namespace monotone::cli {

enum ExitCode : int { kOk = 0, kIoError = 1, kValidationError = 2, kFalsified = 3 };

// Entry point shared by the executable and the tests. Primary output goes to
// `out`; diagnostics, seeds and config headers go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace monotone::cli
