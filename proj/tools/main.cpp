#include <iostream>
#include <string>
#include <vector>

#include "causaldo/cli.hpp"

int main(int argc, char** argv) {
    return causaldo::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
