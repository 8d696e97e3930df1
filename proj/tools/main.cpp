#include <iostream>

#include "ising2mm/cli.hpp"

int main(int argc, char** argv) { return ising2mm::run_cli(argc, argv, std::cout, std::cerr); }
