#include <iostream>
#include <string>
#include <vector>

#include "fomod/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return fomod::run_cli(args, std::cout, std::cerr);
}
