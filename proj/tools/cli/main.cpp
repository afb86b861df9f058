#include <iostream>
#include <string>
#include <vector>

#include "snc_cli/app.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return snc::cli::run_cli(args, std::cout, std::cerr);
}
