#include <iostream>

#include "covmeas/cli.hpp"

int main(int argc, char** argv) { return covmeas::run_cli(argc, argv, std::cout, std::cerr); }
