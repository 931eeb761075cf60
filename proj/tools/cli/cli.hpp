#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sdmp::cli {

/// Exit codes of every subcommand.
enum Exit : int {
  kOk = 0,
  kRejected = 1,     // validation failure or no path
  kBadInput = 2,     // parse or configuration error
  kTransferFailed = 3,
};

/// Runs one command line (without the program name). Reports go to `out`,
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sdmp::cli
