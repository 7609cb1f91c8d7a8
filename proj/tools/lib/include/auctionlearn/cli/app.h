#pragma once

#include <ostream>

namespace auctionlearn::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,
  kExitInfeasible = 2,
  kExitPropertyFailure = 3,
};

// Entry point behind the `auctionlearn` binary.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace auctionlearn::cli
