#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hitasym::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
    kPass = 0,       // every requested verification passed
    kViolation = 1,  // a check failed or the input broke a type invariant
    kUsage = 2,      // bad flags, unreadable file, schema error
};

/// Runs one command line (without the program name). Results go to `out`
/// unless redirected to files; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace hitasym::cli
