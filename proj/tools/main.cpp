#include "attnboost/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return attnboost::run_command(argc, argv, std::cout, std::cerr);
}
