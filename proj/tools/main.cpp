#include <iostream>

#include "condense/cli.hpp"

int main(int argc, char** argv) { return condense::run_cli(argc, argv, std::cout, std::cerr); }
