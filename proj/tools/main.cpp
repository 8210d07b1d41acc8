#include <cstdio>

#include "cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  caustics::cli::CliResult r = caustics::cli::run_cli(args);
  if (!r.out.empty()) std::fwrite(r.out.data(), 1, r.out.size(), stdout);
  if (!r.diag.empty()) std::fwrite(r.diag.data(), 1, r.diag.size(), stderr);
  return r.exit_code;
}
