#include <iostream>

#include "regioncreep/cli.hpp"

int main(int argc, char** argv) { return regioncreep::cli::run(argc, argv, std::cout, std::cerr); }
