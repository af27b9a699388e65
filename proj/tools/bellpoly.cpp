#include <iostream>

#include "bellpoly/cli.hpp"

int main(int argc, char** argv) { return bellpoly::cli::run(argc, argv, std::cout, std::cerr); }
