#include "rogap/cli.hpp"

int main(int argc, char** argv) { return rogap::cli::main(argc, argv); }
