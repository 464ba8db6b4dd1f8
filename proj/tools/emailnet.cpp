#include <iostream>

#include "emailnet/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return emailnet::cli::run(args, std::cout, std::cerr);
}
