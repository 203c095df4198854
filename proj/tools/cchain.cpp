#include "cchain/commands.hpp"

#include <iostream>

int main(int argc, char** argv) { return cchain::cli::run(argc, argv, std::cin, std::cout, std::cerr); }
