#include <iostream>

#include "jgrscan/cli.hpp"

int main(int argc, char** argv) { return jgrscan::run_cli(argc, argv, std::cout, std::cerr); }
