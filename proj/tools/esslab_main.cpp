#include "esslab/cli.hpp"

int main(int argc, char** argv) { return esslab::cli::main(argc, argv); }
