#include <iostream>

#include "fcrk/cli.hpp"

int main(int argc, char** argv) { return fcrk::cli_main(argc, argv, std::cout, std::cerr); }
