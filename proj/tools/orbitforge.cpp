#include <iostream>
#include <string>
#include <vector>

#include "orbitforge/cli.hpp"

int main(int argc, char** argv) {
    return orbitforge::cli::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
