#include <iostream>
#include <string>
#include <vector>

#include "emotag/cli.h"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return emotag::cli::run(args, std::cout, std::cerr);
}
