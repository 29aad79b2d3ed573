#include <iostream>

#include "knotfield/cli.hpp"

int main(int argc, char** argv) {
  return knotfield::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
