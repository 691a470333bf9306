#include <iostream>

#include "suprb/cli.hpp"

int main(int argc, char** argv) { return suprb::run_cli(argc, argv, std::cout, std::cerr); }
