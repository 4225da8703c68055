#include "gridflex/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return gridflex::cli::run_cli(argc, argv, std::cout, std::cerr);
}
