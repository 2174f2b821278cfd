#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kmdesign::cli {

enum ExitCode : int {
  kOk = 0,
  kDomainFailure = 1,
  kUsage = 2,
  kBudget = 3,
};

/// Runs one subcommand. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kmdesign::cli
