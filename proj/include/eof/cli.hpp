#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace eof {

// Entry point behind the eof_solver binary; also callable in-process for
// testing. `args` excludes the program name. Exit codes: 0 success, 1 input
// error, 2 minimizer finished uncertified.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, char** argv);

}  // namespace eof
