#include <iostream>

#include "endspace/cli.hpp"

int main(int argc, char** argv) {
    return endspace::run_cli(argc, argv, std::cout, std::cerr);
}
