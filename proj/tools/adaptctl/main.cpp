#include <iostream>

#include "adaptctl.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return adaptctl::run(args, std::cout, std::cerr);
}
