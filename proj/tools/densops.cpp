#include <iostream>

#include "densops/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return densops::cli::run(std::move(args), std::cout, std::cerr);
}
