#include "cli.hpp"

int main(int argc, char** argv) { return lfunc::cli::run_cli(argc, argv, std::cout, std::cerr); }
