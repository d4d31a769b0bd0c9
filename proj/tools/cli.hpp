#pragma once

#include <iosfwd>

namespace tgfd {

// Exit codes: 0 ok, 1 usage error, 2 input error, 3 unsatisfiable rule set.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tgfd
