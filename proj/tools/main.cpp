#include <iostream>

#include "stepwalk/cli.hpp"

int main(int argc, char** argv) { return stepwalk::cli_main(argc, argv, std::cout, std::cerr); }
