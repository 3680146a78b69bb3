#include <iostream>

#include "zcurv_cli.hpp"

int main(int argc, char** argv) { return zcurv::cli::run(argc, argv, std::cout, std::cerr); }
