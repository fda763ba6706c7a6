#include <iostream>

#include "tmm/harness.hpp"

int main(int argc, char** argv) { return tmm::harness::run_cli(argc, argv, std::cout, std::cerr); }
