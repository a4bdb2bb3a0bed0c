#ifndef FAST_TOOLS_CLI_HPP
#define FAST_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace fast::cli {

/// Process exit codes.
enum ExitCode : int {
    kOk = 0,
    kUsageError = 1,
    kDataError = 2,
    kInternalError = 3,
};

/// Runs the `fast` command line. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fast::cli

#endif  // FAST_TOOLS_CLI_HPP
