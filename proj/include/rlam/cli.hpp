#ifndef RLAM_CLI_HPP
#define RLAM_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace rlam {

// Exit codes: 0 success or Accepted, 1 negative analysis result, 2 usage,
// parse or internal error.
enum ExitCode { exit_ok = 0, exit_negative = 1, exit_error = 2 };

// Runs the command line `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace rlam

#endif
