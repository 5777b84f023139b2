#include "dws/cli.hpp"

int main(int argc, char** argv) { return dws::run_cli(argc, argv); }
