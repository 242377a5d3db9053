#include <iostream>

#include "finsec_tools/cli.hpp"

int main(int argc, char** argv) { return finsec::cli::run(argc, argv, std::cout, std::cerr); }
