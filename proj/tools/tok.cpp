#include "tok/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return tok::cli::run(argc, argv, std::cout, std::cerr); }
