#include <iostream>
#include <string>
#include <vector>

#include "swipt/cli/app.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return swipt::cli::run_cli(args, std::cout, std::cerr);
}
