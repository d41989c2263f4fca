#include <iostream>

#include "blackjack/cli.hpp"

int main(int argc, char** argv) { return blackjack::run_cli(argc, argv, std::cout, std::cerr); }
