#include <iostream>

#include "qsa/cli.hpp"

int main(int argc, char** argv) { return qsa::cli::run(argc, argv, std::cout, std::cerr); }
