#include <iostream>

#include "pmsep/cli.hpp"

int main(int argc, char** argv) { return pmsep::cli::run(argc, argv, std::cout, std::cerr); }
