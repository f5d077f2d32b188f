#pragma once

#include <iosfwd>

namespace stepwalk {

// Subcommands: simulate, ensemble, verify <kind>, weights.
// Returns 0 when all checks pass, 1 when a verification fails, 2 on usage or
// configuration errors (including DegenerateMemory).
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace stepwalk
