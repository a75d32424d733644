#pragma once

#include <iosfwd>

namespace lipfree::cli {

enum ExitCode
{
  kPass = 0,
  kCheckFailed = 1,
  kUsage = 2,
  kBudget = 3
};

/// Entry point of the `lipfree` command; returns the process exit code.
int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace lipfree::cli
