#include "hawklab/cli.hpp"

int main(int argc, char** argv) { return hawklab::cli::run_main(argc, argv); }
