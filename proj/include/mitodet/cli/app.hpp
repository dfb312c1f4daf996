#pragma once

#include <ostream>

namespace mitodet::cli {

// Parses arguments, runs one subcommand and returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mitodet::cli
