#include <iostream>
#include <string>
#include <vector>

#include "robsel/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return robsel::run_cli(args, std::cout, std::cerr);
}
