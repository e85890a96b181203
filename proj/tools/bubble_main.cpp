#include "bubble/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return bubble::cli::run(argc, argv, std::cout, std::cerr); }
