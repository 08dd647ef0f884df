#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace graphlim {

/// Entry point of the graphlim tool. Returns the process exit code:
/// 0 success, 2 parse error, 3 budget or guard exceeded, 4 mathematical
/// precondition violated, 5 internal invariant breach.
int run_cli(int argc, char ** argv, std::ostream & out, std::ostream & err);

/// Same, with argv[0] omitted.
int run_cli(const std::vector<std::string> & args, std::ostream & out, std::ostream & err);

} // namespace graphlim
