#include "wft/cli.hpp"

int main(int argc, char** argv) { return wft::run_cli(argc, argv); }
