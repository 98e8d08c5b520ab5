#include "egs_cli/commands.hpp"

#include <iostream>

int main(int argc, char** argv) { return egs::cli::run(argc, argv, std::cout, std::cerr); }
