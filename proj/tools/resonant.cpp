#include <iostream>

#include "resonant/cli.hpp"

int main(int argc, char** argv) { return resonant::cli::run(argc, argv, std::cout, std::cerr); }
