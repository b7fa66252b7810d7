#include <iostream>
#include <string>
#include <vector>

#include "f2aut/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return f2aut::cli::run(args, std::cout, std::cerr);
}
