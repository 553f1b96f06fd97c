#include "vna/shell.hpp"

#include <iostream>

int main(int argc, char** argv) { return vna::run_cli(argc, argv, std::cout, std::cerr); }
