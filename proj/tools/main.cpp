#include <iostream>

#include "ambiglab/cli.hpp"

int main(int argc, char** argv) {
  return ambiglab::cli::run({argv + 1, argv + argc}, std::cout, std::cerr);
}
