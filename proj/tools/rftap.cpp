#include <iostream>

#include "rftap/cli.hpp"

int main(int argc, char** argv) {
  return rftap::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
