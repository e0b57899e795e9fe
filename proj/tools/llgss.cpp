#include <iostream>

#include "llgss/cli.hpp"

int main(int argc, char** argv) { return llgss::run_cli(argc, argv, std::cout, std::cerr); }
