#include <iostream>

#include "runge/cli.hpp"

int main(int argc, char** argv) { return runge::cli::run(argc, argv, std::cout, std::cerr); }
