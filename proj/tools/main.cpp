#include "fastscan/cli.hpp"

int main(int argc, char** argv) { return fastscan::cli_main(argc, argv); }
