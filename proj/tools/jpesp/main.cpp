#include <iostream>

#include "jpesp/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return jpesp::cli::run(args, std::cout, std::cerr);
}
