#include <iostream>

#include "costsense/cli.hpp"

int main(int argc, char** argv) { return costsense::cli::run(argc, argv, std::cout, std::cerr); }
