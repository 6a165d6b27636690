#include <iostream>

#include "densevec/cli.hpp"

int main(int argc, char** argv) { return densevec::cli::run(argc, argv, std::cout, std::cerr); }
