#include <iostream>

#include "peerlens/cli/commands.hpp"

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);
  return peerlens::cli::run({argv, argv + argc}, std::cin, std::cout, std::cerr);
}
