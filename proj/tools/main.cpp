#include <iostream>

#include "inls/cli.hpp"

int main(int argc, char** argv) { return inls::run_cli(argc, argv, std::cout, std::cerr); }
