#include <iostream>

#include "ifcodec/experiment.hpp"

int main(int argc, char** argv) { return ifcodec::cli::run(argc, argv, std::cout, std::cerr); }
