#include "freenormal/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return freenormal::cli::run(argc, argv, std::cout, std::cerr); }
