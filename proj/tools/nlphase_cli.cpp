#include <iostream>

#include "nlphase/sweep/cli.hpp"

int main(int argc, char** argv) {
    return nlphase::sweep::run_cli(argc, argv, std::cout, std::cerr);
}
