#include <iostream>

#include "anosov/cli.hpp"

int main(int argc, char** argv) { return anosov::run_cli(argc, argv, std::cout, std::cerr); }
