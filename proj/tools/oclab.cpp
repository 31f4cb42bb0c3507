#include "oclab/cli.hpp"

int main(int argc, char** argv) { return oclab::cli::run_cli(argc, argv); }
