#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fomod {

// Runs one tool invocation. `args` holds the command-line arguments without
// the program name. Reports are written to `out` as line-oriented
// "key: value" text with a stable key order; diagnostics go to `err`.
//
// Exit codes: 0 for SAT / true / Prover, 1 for UNSAT / false / Spoiler,
// 2 for inconclusive or unknown outcomes, 3 for usage and input errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace fomod
