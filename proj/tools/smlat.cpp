#include <iostream>

#include "smlat/verify.hpp"

int main(int argc, char** argv) { return smlat::cmd_dispatch(argc, argv, std::cout, std::cerr); }
