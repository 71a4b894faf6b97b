#include <iostream>

#include "svstokes/cli.hpp"

int main(int argc, char** argv) { return svstokes::cli::run(argc, argv, std::cout, std::cerr); }
