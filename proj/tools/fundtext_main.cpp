#include <iostream>
#include <string>
#include <vector>

#include "fundtext/cli/pipeline.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return fundtext::cli::run_command(args, std::cout, std::cerr);
}
