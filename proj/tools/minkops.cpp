#include <iostream>

#include "minkops/cli.hpp"

int main(int argc, char** argv) { return minkops::run(argc, argv, std::cout, std::cerr); }
