#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mhdv {

/// Command-line front end.  `args` excludes the program name.
/// Exit codes: 0 success, 1 invalid input or usage, 2 run aborted.
int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace mhdv
