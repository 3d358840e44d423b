#pragma once

#include <iosfwd>

namespace ipsw {

// Exit codes: 0 ok, 1 semantic failure, 2 satisfiable input, 3 usage, parse or resource error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ipsw
