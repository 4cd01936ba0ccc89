#include <iostream>

#include "resgeom_cli.hpp"

int main(int argc, char** argv) { return resgeom::cli::run(argc, argv, std::cin, std::cout, std::cerr); }
