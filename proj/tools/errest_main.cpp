#include <iostream>

#include "errest/cli.hpp"

int main(int argc, char** argv) { return errest::run_cli(argc, argv, std::cout, std::cerr); }
