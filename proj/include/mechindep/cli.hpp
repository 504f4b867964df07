#pragma once

#include <ostream>

namespace mechindep {

/// Entry point of the command-line tool. Exit codes: 0 when every requested
/// criterion holds, 1 when at least one fails, 2 on usage or input errors.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mechindep
