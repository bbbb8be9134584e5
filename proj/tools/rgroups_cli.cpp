#include <iostream>

#include "rgroups/cli.hpp"

int main(int argc, char** argv) { return rgroups::dispatch(argc, argv, std::cout, std::cerr); }
