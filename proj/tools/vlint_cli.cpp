#include <iostream>

#include <vlint/cli.hpp>

int main(int argc, char** argv) { return vlint::cli::main(argc, argv, std::cout, std::cerr); }
