#include <iostream>

#include "quantopt/cli.hpp"

int main(int argc, char** argv) {
  return quantopt::cli::main(argc, argv, std::cout, std::cerr);
}
