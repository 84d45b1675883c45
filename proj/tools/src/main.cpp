#include <iostream>

#include "lab.hpp"

int main(int argc, char** argv) {
  return yamabe::lab::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
