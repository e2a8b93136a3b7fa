#include <iostream>

#include "gibc/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return gibc::cli::run(args, std::cout, std::cerr);
}
