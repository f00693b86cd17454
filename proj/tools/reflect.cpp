#include <iostream>

#include "reflect/cli/commands.hpp"

int main(int argc, char** argv) { return reflect::cli::run(argc, argv, std::cout, std::cerr); }
