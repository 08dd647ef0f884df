#include "graphlim/commands.hpp"

#include <iostream>

int main(int argc, char ** argv)
{
    return graphlim::run_cli(argc, argv, std::cout, std::cerr);
}
