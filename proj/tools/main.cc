#include <iostream>

#include "auctionlearn/cli/app.h"

int main(int argc, char** argv) {
  return auctionlearn::cli::run_cli(argc, argv, std::cout, std::cerr);
}
