#include "acca/cli.hpp"

int main(int argc, char** argv) { return acca::run_cli(argc, argv); }
