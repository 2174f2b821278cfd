#include <iostream>

#include "kmdesign/cli.hpp"

int main(int argc, char** argv) {
  return kmdesign::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
