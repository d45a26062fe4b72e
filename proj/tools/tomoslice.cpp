#include <iostream>
#include <string>
#include <vector>

#include "tomoslice/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return tomoslice::cli::run(args, std::cout, std::cerr);
}
