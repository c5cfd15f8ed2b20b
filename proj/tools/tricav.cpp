#include <iostream>

#include "tricav/cli.hpp"

int main(int argc, char** argv) { return tricav::cli::main(argc, argv, std::cout, std::cerr); }
