#ifndef EMOTAG_CLI_H_
#define EMOTAG_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace emotag::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kFailure = 1;  // error raised by a pipeline stage
inline constexpr int kUsage = 2;    // bad flags, unknown subcommand

// Runs one invocation. args excludes the program name. Failures print a
// single "error<TAB>category<TAB>message" line to err.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace emotag::cli

#endif  // EMOTAG_CLI_H_
