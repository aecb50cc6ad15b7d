#include <iostream>
#include <string>
#include <vector>

#include "relmine/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return relmine::cli::run(args, std::cout, std::cerr);
}
