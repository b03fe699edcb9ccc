#include "sailforge/cli.hpp"

int main(int argc, char** argv) { return sailforge::run_cli(argc, argv); }
