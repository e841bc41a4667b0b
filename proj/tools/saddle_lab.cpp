#include <iostream>

#include "saddle/cli.hpp"

int main(int argc, char** argv) { return saddle::cli::main(argc, argv, std::cout, std::cerr); }
