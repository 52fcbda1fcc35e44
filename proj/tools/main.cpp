#include <iostream>
#include <string>
#include <vector>

#include "sketchsearch/cli.hpp"

int main(int argc, char** argv) {
    return sketchsearch::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
