#include "covadmm/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return covadmm::cli::run(argc, argv, std::cout, std::cerr); }
