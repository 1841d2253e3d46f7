#include <iostream>

#include "ltk/cli.hpp"

int main(int argc, char** argv) { return ltk::run_cli(argc, argv, std::cout, std::cerr); }
