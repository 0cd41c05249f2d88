#include <iostream>
#include <string>
#include <vector>

#include "dircurv/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return dircurv::cli::run(args, std::cout, std::cerr);
}
