#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tessera {

// Runs one CLI invocation. args excludes the program name. Returns 0 on
// success, 1 on usage/validation errors, 2 on internal assertion failures
// (cost-bound violations, path-construction postcondition failures).
int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace tessera
