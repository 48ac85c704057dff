#pragma once

#include <iosfwd>

namespace regext::cli {

// Exit codes shared by every subcommand.
enum Exit : int { ok = 0, math_failure = 1, input_error = 2, io_error = 3 };

// Entry point of the regime-extract tool; main() forwards here so the
// subcommands can be driven from tests with captured streams.
int run(int argc, const char* const argv[], std::ostream& out, std::ostream& err);

}  // namespace regext::cli
