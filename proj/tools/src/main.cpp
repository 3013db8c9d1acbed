#include <iostream>

#include "toric_hk_cli/cli.hpp"

int main(int argc, char** argv) {
  return toric_hk::cli::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
