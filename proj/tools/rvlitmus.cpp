#include <iostream>

#include "rvlitmus/cli.hpp"

int main(int argc, char** argv) {
  return rvlitmus::cli::main(argc, argv, std::cout, std::cerr);
}
