#include "bh/cli.hpp"

int main(int argc, char** argv) { return bh::cli::run(argc, argv); }
