#include <iostream>

#include "stlc/cli.hpp"

int main(int argc, char** argv) { return stlc::cli::run(argc, argv, std::cout, std::cerr); }
