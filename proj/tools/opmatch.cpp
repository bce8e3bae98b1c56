#include <iostream>

#include "opmatch/cli.h"

int main(int argc, char** argv) { return opmatch::cli::run(argc, argv, std::cout, std::cerr); }
