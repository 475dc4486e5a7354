#include "caged/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return caged::run(argc, argv, std::cout, std::cerr);
}
