#include <iostream>

#include "mechindep/cli.hpp"

int main(int argc, char** argv) { return mechindep::run_cli(argc, argv, std::cout, std::cerr); }
