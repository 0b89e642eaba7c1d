#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace fpmc::cli {

enum ExitCode : int {
  kTrue = 0,
  kFalse = 1,
  kUsage = 2,
  kRefused = 3,
};

/// Runs one command line (without the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fpmc::cli
