#include "lmdpp/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return lmdpp::cli_main(argc, argv, std::cout, std::cerr); }
