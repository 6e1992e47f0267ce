#include <iostream>

#include "primepairs/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return primepairs::cli::dispatch(args, std::cout, std::cerr);
}
