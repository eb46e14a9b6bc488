#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) { return csit::cli::run(argc, argv, std::cout, std::cerr); }
