#include <iostream>

#include "sncl/cli.hpp"

int main(int argc, char** argv) { return sncl::run_cli(argc, argv, std::cout, std::cerr); }
