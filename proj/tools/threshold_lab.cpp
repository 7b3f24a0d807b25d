#include <iostream>
#include <string>
#include <vector>

#include "threshold_lab/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return threshold_lab::cli::run(args, std::cout, std::cerr);
}
