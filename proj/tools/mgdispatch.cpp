#include <iostream>
#include <string>
#include <vector>

#include "mgd/cli.hpp"

int main(int argc, char** argv)
{
    return mgd::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
