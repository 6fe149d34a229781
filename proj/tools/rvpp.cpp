#include <iostream>

#include "rvpp/cli/cli.hpp"

int main(int argc, char** argv) { return rvpp::cli::run(argc, argv, std::cout, std::cerr); }
