#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace trajpred::cli {

/// Process exit codes.
enum ExitCode : int {
    kSuccess = 0,      // possibly with warnings on the diagnostic stream
    kUsage = 1,
    kDataError = 2,    // parse, validation, alignment, I/O
    kConvergence = 3,  // an SVR fit did not converge (outputs are still written)
};

/// Runs one command line (args excludes the program name). Data goes to the
/// files named by the flags, tables to `out`, warnings and errors to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace trajpred::cli
