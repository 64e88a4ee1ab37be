#include <iostream>

#include "nmsim/cli.hpp"

int main(int argc, char** argv) { return nmsim::cli::run_cli(argc, argv, std::cout, std::cerr); }
