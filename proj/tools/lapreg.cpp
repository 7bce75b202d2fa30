#include <iostream>
#include <string>
#include <vector>

#include "lapreg/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return lapreg::cli::run(args, std::cout, std::cerr);
}
