#include <iostream>
#include <string>
#include <vector>

#include "mrgnn/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return mrgnn::run_cli(args, std::cout, std::cerr);
}
