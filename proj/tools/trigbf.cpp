#include <iostream>

#include "trigbf/cli.hpp"

int main(int argc, char** argv) { return trigbf::cli::run_cli(argc, argv, std::cout, std::cerr); }
