#pragma once

// Command-line front end. main() forwards here so tests can run commands
// in-process.

#include <iosfwd>
#include <string>
#include <vector>

#include "netbound/acceptance.hpp"

namespace netbound::cli {

enum ExitCode : int {
  kOk = 0,
  kVerificationFailed = 1,
  kUsage = 2,
  kMissingMeasure = 3,
};

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const acceptance::Oracles& oracles = acceptance::Oracles());

}  // namespace netbound::cli
