#pragma once

#include <string>
#include <vector>

namespace caustics::cli {

struct CliResult {
  int exit_code = 0;
  std::string out;   // primary payload (stdout)
  std::string diag;  // one-line machine-parsable diagnostics (stderr)
};

/// Run the command-line interface on an argument vector (excluding argv[0]).
/// Never throws; failures are mapped to exit codes 1/2/3 with a reason line.
CliResult run_cli(const std::vector<std::string>& args);

}  // namespace caustics::cli
