#include "al/cli.hpp"

int main(int argc, char** argv) { return al::cli::main(argc, argv); }
