#include <iostream>

#include "tlif_cli/cli.hpp"

int main(int argc, char** argv) { return tlif::cli::main_entry(argc, argv, std::cout, std::cerr); }
