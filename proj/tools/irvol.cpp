#include <iostream>

#include "irvol/cli.hpp"

int main(int argc, char** argv) { return irvol::run_cli(argc, argv, std::cout, std::cerr); }
