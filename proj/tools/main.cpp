#include <iostream>

#include "holofocus/cli.hpp"

int main(int argc, char** argv) { return holofocus::cli::run(argc, argv, std::cout, std::cerr); }
