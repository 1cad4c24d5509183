#include <iostream>
#include <string>
#include <vector>

#include "qmeas/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return qmeas::run(args, std::cout, std::cerr);
}
