#include <iostream>

#include "mitodet/cli/app.hpp"

int main(int argc, char** argv) { return mitodet::cli::run(argc, argv, std::cout, std::cerr); }
