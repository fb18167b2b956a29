#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cpdk {

/// Exit codes of the command-line tool.
enum ExitCode : int {
    kHolds = 0,      ///< property holds / construction succeeded
    kFails = 1,      ///< property fails; the report carries a witness
    kInputError = 2, ///< malformed input or validation error
};

/// Runs one command. `args` excludes the program name. The report goes to
/// `out`, diagnostics to `err`; input files named "-" are read from `in`.
int run_cli(const std::vector<std::string> &args, std::istream &in,
            std::ostream &out, std::ostream &err);

} // namespace cpdk
