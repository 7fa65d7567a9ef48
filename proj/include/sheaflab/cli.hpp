#pragma once

// Command-line front end. Reports are flat key=value lines, optionally
// followed by witness blocks in the text formats of io.hpp, each framed by
// begin_witness=<kind> and end_witness=<kind>.
//
// Exit codes: 0 pass, 1 mathematical violation (witness emitted),
// 2 input error, 3 budget exhausted or skipped. Every nonzero exit prints an
// error=<kind> line followed by message=<text>.

#include <iosfwd>
#include <string>
#include <vector>

namespace sheaflab {

enum ExitCode : int { kExitPass = 0, kExitViolation = 1, kExitInput = 2, kExitBudget = 3 };

// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out);

}  // namespace sheaflab
