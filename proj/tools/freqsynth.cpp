#include "freqsynth/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  return freqsynth::run_cli(argc, argv, std::cout, std::cerr);
}
