#include <iostream>

#include "qlearn/cli.hpp"

int main(int argc, char** argv) { return qlearn::cli::run(argc, argv, std::cout, std::cerr); }
