#include <iostream>

#include "nlm/cli.hpp"

int main(int argc, char** argv) {
    return nlm::cli::run_cli(argc, argv, std::cout, std::cerr);
}
