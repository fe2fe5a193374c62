#include <iostream>
#include <string>
#include <vector>

#include "skewbench/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv, argv + argc);
  return skewbench::run_cli(args, std::cout, std::cerr);
}
