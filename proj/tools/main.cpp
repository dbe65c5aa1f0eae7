#include <iostream>
#include <string>
#include <vector>

#include "smtkc/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return smtkc::cli::run(args, std::cout, std::cerr);
}
