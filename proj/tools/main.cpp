#include <iostream>

#include "ellweyl/cli.hpp"

int main(int argc, char **argv)
{
    return ellweyl::run_cli(argc, argv, std::cout, std::cerr);
}
