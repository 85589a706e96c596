#include <iostream>

#include "cbrn/cli.hpp"

int main(int argc, char** argv) { return cbrn::cli::run(argc, argv, std::cout, std::cerr); }
