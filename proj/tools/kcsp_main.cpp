#include "kcsp/cli.hpp"

int main(int argc, char** argv) { return kcsp::cli_run(argc, argv); }
