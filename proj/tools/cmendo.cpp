#include <iostream>

#include "cmendo/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return cmendo::run_command(args, std::cout, std::cerr);
}
