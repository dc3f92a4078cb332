#include "wie/cli.hpp"

int main(int argc, char** argv) { return wie::run_cli(argc, argv); }
