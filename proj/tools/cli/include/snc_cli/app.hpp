#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace snc::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitValidation = 2,
  kExitVerificationFailed = 3,
  kExitUnstable = 4,
};

// Runs the `snc` command line. `args` excludes the program name. Results go
// to `out` (or the --out file), diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Thread count from SNC_THREADS, or 0 (all hardware threads) when unset.
unsigned threads_from_env();

}  // namespace snc::cli
