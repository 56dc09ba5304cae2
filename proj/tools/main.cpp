#include <iostream>

#include "rootflag/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return rootflag::cli::run(args, std::cout, std::cerr);
}
