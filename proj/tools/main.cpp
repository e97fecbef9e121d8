#include <iostream>
#include <string>
#include <vector>

#include "hmlam/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return hmlam::run_command(args, std::cout, std::cerr);
}
