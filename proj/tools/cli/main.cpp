#include <iostream>

#include "surfrank_cli.hpp"

int main(int argc, char** argv) { return surfrank::cli::run_cli(argc, argv, std::cout, std::cerr); }
