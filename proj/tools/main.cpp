#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) { return varbvp::cli::run(argc, argv, std::cout); }
