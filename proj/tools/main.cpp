#include <iostream>
#include <string>
#include <vector>

#include "riemann2d/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return riemann2d::run_cli(args, std::cout, std::cerr);
}
